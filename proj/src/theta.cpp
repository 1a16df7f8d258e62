#include "shaforge/theta.hpp"

namespace shaforge::theta {

Heisenberg::Heisenberg(long n) : n_(n) {
    if (n < 2) throw Error("Heisenberg: n must be >= 2");
}

HeisenbergElement Heisenberg::make(long s, long p1, long p2) const {
    return {norm(s), norm(p1), norm(p2)};
}

HeisenbergElement Heisenberg::mul(const HeisenbergElement& x, const HeisenbergElement& y) const {
    return {norm(x.s + y.s + x.p1 * y.p2), norm(x.p1 + y.p1), norm(x.p2 + y.p2)};
}

HeisenbergElement Heisenberg::inv(const HeisenbergElement& x) const {
    // (s, P)^(-1) = (-s + P1*P2, -P): check (s,P)*(-s+P1P2,-P) has scalar
    // s - s + P1P2 + P1*(-P2) = 0
    return {norm(-x.s + x.p1 * x.p2), norm(-x.p1), norm(-x.p2)};
}

std::vector<HeisenbergElement> Heisenberg::elements() const {
    std::vector<HeisenbergElement> out;
    out.reserve(n_ * n_ * n_);
    for (long s = 0; s < n_; ++s)
        for (long a = 0; a < n_; ++a)
            for (long b = 0; b < n_; ++b) out.push_back({s, a, b});
    return out;
}

FiniteAbelianGroup::Elt FiniteAbelianGroup::add(const Elt& a, const Elt& b) const {
    Elt out(orders.size());
    for (size_t i = 0; i < orders.size(); ++i) out[i] = (a[i] + b[i]) % orders[i];
    return out;
}

std::vector<FiniteAbelianGroup::Elt> FiniteAbelianGroup::elements() const {
    std::vector<Elt> out{zero()};
    for (size_t i = 0; i < orders.size(); ++i) {
        std::vector<Elt> next;
        for (const Elt& e : out)
            for (long v = 0; v < orders[i]; ++v) {
                Elt e2 = e;
                e2[i] = v;
                next.push_back(e2);
            }
        out = std::move(next);
    }
    return out;
}

long FiniteAbelianGroup::size() const {
    long s = 1;
    for (long o : orders) s *= o;
    return s;
}

bool CocycleTable::satisfies_cocycle_identity(const FiniteAbelianGroup& gamma) const {
    auto elts = gamma.elements();
    for (const auto& s : elts)
        for (const auto& t : elts)
            for (const auto& r : elts) {
                long lhs = entries.at({t, r}) - entries.at({gamma.add(s, t), r}) +
                           entries.at({s, gamma.add(t, r)}) - entries.at({s, t});
                if (((lhs % n) + n) % n != 0) return false;
            }
    return true;
}

namespace {

HeisenbergElement twisted_action(const Heisenberg& H, const FiniteGaloisData& data,
                                 const FiniteAbelianGroup::Elt& sigma,
                                 const HeisenbergElement& x) {
    auto [c1, c2] = data.chi.value.at(sigma);
    return H.make(x.s + c1 * x.p1 + c2 * x.p2, x.p1, x.p2);
}

}  // namespace

CocycleTable coboundary(const FiniteGaloisData& data) {
    Heisenberg H(data.n);
    CocycleTable table;
    table.n = data.n;
    auto lift = [&](const FiniteAbelianGroup::Elt& sigma) {
        auto [p1, p2] = data.eta.value.at(sigma);
        return H.make(0, p1, p2);
    };
    for (const auto& sigma : data.gamma.elements())
        for (const auto& tau : data.gamma.elements()) {
            HeisenbergElement prod =
                H.mul(H.mul(lift(sigma), twisted_action(H, data, sigma, lift(tau))),
                      H.inv(lift(data.gamma.add(sigma, tau))));
            if (!H.central(prod))
                throw VerificationFailure("coboundary product not central (eta not a cocycle?)");
            table.entries[{sigma, tau}] = prod.s;
        }
    return table;
}

CocycleTable formula_rhs(const FiniteGaloisData& data) {
    CocycleTable table;
    table.n = data.n;
    for (const auto& sigma : data.gamma.elements())
        for (const auto& tau : data.gamma.elements()) {
            auto [c1, c2] = data.chi.value.at(sigma);
            auto [es1, es2] = data.eta.value.at(sigma);
            auto [et1, et2] = data.eta.value.at(tau);
            long v = c1 * et1 + c2 * et2 + es1 * et2;
            table.entries[{sigma, tau}] = ((v % data.n) + data.n) % data.n;
        }
    return table;
}

bool verify_decomposition(const FiniteGaloisData& data) {
    CocycleTable lhs = coboundary(data);
    CocycleTable rhs = formula_rhs(data);
    return lhs == rhs && lhs.satisfies_cocycle_identity(data.gamma) &&
           rhs.satisfies_cocycle_identity(data.gamma);
}

std::vector<PointMap> all_point_maps(const FiniteAbelianGroup& gamma, long n) {
    auto elts = gamma.elements();
    std::vector<std::pair<long, long>> codomain;
    for (long a = 0; a < n; ++a)
        for (long b = 0; b < n; ++b) codomain.emplace_back(a, b);

    // a homomorphism is a choice of generator images killed by the factor order
    size_t k = gamma.orders.size();
    std::vector<PointMap> out;
    std::vector<size_t> pick(k, 0);
    while (true) {
        bool valid = true;
        for (size_t i = 0; i < k && valid; ++i) {
            auto [a, b] = codomain[pick[i]];
            valid = (gamma.orders[i] * a) % n == 0 && (gamma.orders[i] * b) % n == 0;
        }
        if (valid) {
            PointMap m;
            for (const auto& e : elts) {
                long a = 0, b = 0;
                for (size_t i = 0; i < k; ++i) {
                    a += e[i] * codomain[pick[i]].first;
                    b += e[i] * codomain[pick[i]].second;
                }
                m.value[e] = {a % n, b % n};
            }
            out.push_back(std::move(m));
        }
        size_t i = 0;
        for (; i < k; ++i) {
            if (++pick[i] < codomain.size()) break;
            pick[i] = 0;
        }
        if (i == k) break;
    }
    return out;
}

long verify_all(long n, const FiniteAbelianGroup& gamma) {
    auto maps = all_point_maps(gamma, n);
    long checked = 0;
    for (const PointMap& eta : maps)
        for (const PointMap& chi : maps) {
            FiniteGaloisData data{n, gamma, eta, chi};
            if (!verify_decomposition(data))
                throw VerificationFailure("cocycle decomposition mismatch at case " +
                                          std::to_string(checked));
            ++checked;
        }
    return checked;
}

}  // namespace shaforge::theta
