#include "hdrflow/curve.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace hdrflow {

MarkedProjLine::MarkedProjLine(const FqCtx& ctx, std::vector<MarkedPoint> marked)
    : ctx_(&ctx), marked_(std::move(marked)), van_(ctx) {
    if (marked_.size() < 3) throw std::invalid_argument("need at least 3 marked points");
    std::set<std::string> seen;
    for (const auto& m : marked_) {
        if (!m.at_infinity && (m.value < 0 || m.value >= ctx.p()))
            throw std::invalid_argument("marked point out of range");
        if (!seen.insert(m.str()).second) throw std::invalid_argument("marked points must be distinct");
    }
    bool norm = !marked_[0].at_infinity && marked_[0].value == 0 && !marked_[1].at_infinity &&
                marked_[1].value == 1 && marked_[2].at_infinity;
    if (!norm) throw std::invalid_argument("marked points must be normalized to start 0, 1, inf");
    for (const auto& m : marked_)
        if (!m.at_infinity) finite_.emplace_back(ctx, m.value);
    van_ = Poly::constant(Fq::one(ctx));
    for (const auto& a : finite_) van_ = van_ * Poly::linear(a);
}

MarkedProjLine MarkedProjLine::rational(const FqCtx& ctx, const std::vector<std::string>& names) {
    std::vector<MarkedPoint> pts;
    for (const auto& n : names) {
        if (n == "inf" || n == "oo" || n == "infinity") pts.push_back({true, 0});
        else {
            size_t pos = 0;
            long v = std::stol(n, &pos);
            if (pos != n.size()) throw std::invalid_argument("bad marked point: " + n);
            long pr = ctx.p();
            v %= pr;
            if (v < 0) v += pr;
            pts.push_back({false, static_cast<int>(v)});
        }
    }
    return MarkedProjLine(ctx, std::move(pts));
}

Fq MarkedProjLine::chart_point(int chart) const {
    if (!chart_is_finite(chart)) throw std::invalid_argument("infinity chart has no finite point");
    return finite_[chart];
}

int MarkedProjLine::chart_of_marked(int marked_index) const {
    if (marked_index < 0 || marked_index >= r()) throw std::out_of_range("marked index");
    if (marked_[marked_index].at_infinity) return infinity_chart();
    int chart = 0;
    for (int i = 0; i < marked_index; ++i)
        if (!marked_[i].at_infinity) ++chart;
    return chart;
}

int MarkedProjLine::marked_of_chart(int chart) const {
    if (chart == infinity_chart()) {
        for (int i = 0; i < r(); ++i)
            if (marked_[i].at_infinity) return i;
    }
    int seen = 0;
    for (int i = 0; i < r(); ++i) {
        if (marked_[i].at_infinity) continue;
        if (seen == chart) return i;
        ++seen;
    }
    throw std::out_of_range("chart index");
}

Poly MarkedProjLine::vanishing_except(int chart) const {
    return van_.divide_exact(Poly::linear(chart_point(chart)));
}

RatFunc MarkedProjLine::log_vector_factor(int chart) const {
    if (chart_is_finite(chart)) return RatFunc::of(Poly::linear(chart_point(chart)));
    return RatFunc::of(-Poly::t(*ctx_));
}

MarkedProjLine MarkedProjLine::base_change(const FqCtx& target) const {
    if (target.p() != ctx_->p()) throw std::invalid_argument("base change must preserve p");
    return MarkedProjLine(target, marked_);
}

std::string MarkedProjLine::str() const {
    std::ostringstream os;
    os << "P1(p=" << p() << ",m=" << ctx_->m() << "; ";
    for (size_t i = 0; i < marked_.size(); ++i) {
        if (i) os << ",";
        os << marked_[i].str();
    }
    os << ")";
    return os.str();
}

LineBundleF::LineBundleF(const MarkedProjLine& X, int degree, std::vector<RatFunc> frames)
    : X_(&X), deg_(degree), frames_(std::move(frames)) {
    if (static_cast<int>(frames_.size()) != X.num_charts())
        throw std::invalid_argument("one frame per chart required");
}

LineBundleF LineBundleF::canonical(const MarkedProjLine& X, int degree) {
    std::vector<RatFunc> frames;
    for (int c = 0; c < X.num_charts(); ++c)
        frames.push_back(X.chart_is_finite(c) ? RatFunc::constant(Fq::one(X.ctx()))
                                              : RatFunc::t_power(X.ctx(), degree));
    return LineBundleF(X, degree, std::move(frames));
}

LineBundleF LineBundleF::tensor(const LineBundleF& o) const {
    std::vector<RatFunc> frames;
    for (int c = 0; c < X_->num_charts(); ++c) frames.push_back(frames_[c] * o.frames_[c]);
    return LineBundleF(*X_, deg_ + o.deg_, std::move(frames));
}

LineBundleF LineBundleF::dual() const {
    std::vector<RatFunc> frames;
    for (const auto& f : frames_) frames.push_back(f.inverse());
    return LineBundleF(*X_, -deg_, std::move(frames));
}

LineBundleF LineBundleF::power(int n) const {
    std::vector<RatFunc> frames;
    for (const auto& f : frames_) frames.push_back(f.pow(n));
    return LineBundleF(*X_, deg_ * n, std::move(frames));
}

LineBundleF LineBundleF::frobenius_pullback() const {
    std::vector<RatFunc> frames;
    for (const auto& f : frames_) frames.push_back(f.pth_power());
    return LineBundleF(*X_, deg_ * X_->p(), std::move(frames));
}

LineBundleF LineBundleF::twist(int n) const { return tensor(canonical(*X_, n)); }

bool LineBundleF::frames_valid() const {
    // frame_c / canonical_c must be a unit on chart c: zeros and poles only at
    // the marked points excluded from the chart
    for (int c = 0; c < X_->num_charts(); ++c) {
        RatFunc u = frames_[c];
        if (u.is_zero()) return false;
        if (X_->chart_is_finite(c)) {
            Fq own = X_->chart_point(c);
            if (u.order_at(own) != 0) return false;
            // all zero/pole factors must be among excluded finite marked points
            Poly probe = u.num() * u.den();
            Poly reduced = probe;
            for (const auto& b : X_->finite_points()) {
                if (b == own) continue;
                int mult = reduced.root_multiplicity(b);
                if (mult) reduced = reduced.divide_exact(Poly::linear(b).pow(mult));
            }
            if (reduced.degree() != 0) return false;
        } else {
            RatFunc u_can = u / RatFunc::t_power(X_->ctx(), deg_);
            if (u_can.order_at_infinity() != 0) return false;
            Poly probe = u_can.num() * u_can.den();
            Poly reduced = probe;
            for (const auto& b : X_->finite_points()) {
                int mult = reduced.root_multiplicity(b);
                if (mult) reduced = reduced.divide_exact(Poly::linear(b).pow(mult));
            }
            if (reduced.degree() != 0) return false;
        }
    }
    return true;
}

bool LineBundleF::same_frames(const LineBundleF& o) const {
    if (deg_ != o.deg_) return false;
    for (size_t i = 0; i < frames_.size(); ++i)
        if (!(frames_[i] == o.frames_[i])) return false;
    return true;
}

LineBundleF omega_log(const MarkedProjLine& X) {
    const FqCtx& ctx = X.ctx();
    std::vector<RatFunc> frames;
    for (int c = 0; c < X.num_charts(); ++c) {
        if (X.chart_is_finite(c)) frames.push_back(RatFunc::of(X.vanishing_except(c)));
        else frames.push_back(RatFunc(-X.vanishing_poly(), Poly::t(ctx)));
    }
    return LineBundleF(X, X.r() - 2, std::move(frames));
}

LineBundleF tangent_log(const MarkedProjLine& X) { return omega_log(X).dual(); }

Fq residue_at(const MarkedProjLine& X, int chart, const RatFunc& coeff_vs_w) {
    if (X.chart_is_finite(chart)) return coeff_vs_w.eval(X.chart_point(chart));
    return coeff_vs_w.eval_at_infinity();
}

}  // namespace hdrflow
