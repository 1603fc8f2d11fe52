/**
 * @file semiring.cpp
 * @brief Built-in grade algebras, the lattice loader, and classification.
 */
#include "grad/semiring.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace grad {

namespace {

constexpr std::size_t kMaxCarrier = 64;

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

} // namespace

std::size_t Semiring::carrier_size() const {
    if (!finite_) throw ConfigError("carrier-too-large: naturals have no finite carrier");
    return elems_.size();
}

std::vector<Grade> Semiring::carrier() const {
    if (!finite_) throw ConfigError("carrier-too-large: naturals cannot be enumerated");
    std::vector<Grade> out;
    out.reserve(elems_.size());
    for (std::uint64_t i = 0; i < elems_.size(); ++i) out.push_back(Grade{i});
    return out;
}

bool Semiring::valid(Grade q) const { return !finite_ || q.raw < elems_.size(); }

Grade Semiring::add(Grade a, Grade b) const {
    if (!finite_) return Grade{a.raw + b.raw};
    return Grade{add_[a.raw * elems_.size() + b.raw]};
}

Grade Semiring::mul(Grade a, Grade b) const {
    if (!finite_) return Grade{a.raw * b.raw};
    return Grade{mul_[a.raw * elems_.size() + b.raw]};
}

bool Semiring::leq(Grade a, Grade b) const {
    if (!finite_) return a.raw <= b.raw;
    return leq_[a.raw * elems_.size() + b.raw] != 0;
}

std::optional<Grade> Semiring::decrement(Grade q, Grade r) const {
    if (!finite_) {
        if (r.raw > q.raw) return std::nullopt; // not enough copies left
        return Grade{q.raw - r.raw};
    }
    // Candidates are all q' with q' + r ≤ q; keep a maximal one, first in
    // carrier order among the maximal candidates.
    std::vector<Grade> cands;
    for (std::uint64_t i = 0; i < elems_.size(); ++i)
        if (leq(add(Grade{i}, r), q)) cands.push_back(Grade{i});
    if (cands.empty()) return std::nullopt;
    for (Grade c : cands) {
        bool maximal = true;
        for (Grade d : cands)
            if (d != c && leq(c, d)) {
                maximal = false;
                break;
            }
        if (maximal) return c;
    }
    return cands.front(); // unreachable in a finite poset; defensive
}

std::optional<Grade> Semiring::lub(Grade a, Grade b) const {
    if (!finite_) return Grade{std::max(a.raw, b.raw)};
    std::optional<Grade> best;
    for (std::uint64_t i = 0; i < elems_.size(); ++i) {
        Grade u{i};
        if (!(leq(a, u) && leq(b, u))) continue;
        if (!best || leq(u, *best)) best = u;
    }
    if (!best) return std::nullopt;
    // least: must sit below every other upper bound
    for (std::uint64_t i = 0; i < elems_.size(); ++i) {
        Grade u{i};
        if (leq(a, u) && leq(b, u) && !leq(*best, u)) return std::nullopt;
    }
    return best;
}

bool Semiring::minimal(Grade q) const {
    if (!finite_) return q.raw == 0;
    for (std::uint64_t i = 0; i < elems_.size(); ++i)
        if (Grade{i} != q && leq(Grade{i}, q)) return false;
    return true;
}

bool Semiring::usable(Grade g) const {
    if (!finite_) return g.raw >= 1;
    for (std::uint64_t i = 0; i < elems_.size(); ++i)
        if (leq(add(Grade{i}, one_), g)) return true;
    return false;
}

std::string Semiring::show(Grade q) const {
    if (!finite_) return std::to_string(q.raw);
    return elems_.at(q.raw);
}

std::optional<Grade> Semiring::parse_grade(std::string_view text) const {
    if (!finite_) {
        if (!all_digits(text) || text.size() > 18) return std::nullopt;
        return Grade{std::stoull(std::string(text))};
    }
    for (std::uint64_t i = 0; i < elems_.size(); ++i)
        if (elems_[i] == text) return Grade{i};
    return std::nullopt;
}

void Semiring::enumerate_flags() {
    const std::size_t n = elems_.size();
    if (n > kMaxCarrier)
        throw ConfigError(fmt::format("carrier-too-large: {} elements exceeds the "
                                      "classification bound {}",
                                      n, kMaxCarrier));
    auto& f = flags_;
    f.zero_unusable = true;
    f.one_linear = true;
    f.zerosumfree = true;
    f.entire = true;
    f.linear = true;
    f.has_lub = true;
    for (std::uint64_t i = 0; i < n; ++i) {
        Grade q{i};
        if (leq(add(q, one_), zero_)) f.zero_unusable = false;
        if (q != zero_ && leq(add(q, one_), one_)) f.one_linear = false;
        for (std::uint64_t j = 0; j < n; ++j) {
            Grade p{j};
            if (add(q, p) == zero_ && !(q == zero_ && p == zero_)) f.zerosumfree = false;
            if (mul(q, p) == zero_ && q != zero_ && p != zero_) f.entire = false;
            if (add(q, p) == one_ &&
                !((q == one_ && p == zero_) || (q == zero_ && p == one_)))
                f.linear = false;
            if (mul(q, p) == one_ && !(q == one_ && p == one_)) f.linear = false;
            if (!lub(q, p)) f.has_lub = false;
        }
    }
}

Semiring Semiring::finite(std::string name, std::vector<std::string> elems,
                          std::vector<std::uint8_t> add_table,
                          std::vector<std::uint8_t> mul_table,
                          std::vector<std::uint8_t> leq_table, std::size_t zero,
                          std::size_t one) {
    Semiring sr;
    sr.name_ = std::move(name);
    sr.finite_ = true;
    sr.elems_ = std::move(elems);
    sr.add_ = std::move(add_table);
    sr.mul_ = std::move(mul_table);
    sr.leq_ = std::move(leq_table);
    sr.zero_ = Grade{zero};
    sr.one_ = Grade{one};
    sr.enumerate_flags();
    return sr;
}

Semiring Semiring::naturals() {
    Semiring sr;
    sr.name_ = "nat";
    sr.finite_ = false;
    sr.zero_ = Grade{0};
    sr.one_ = Grade{1};
    // No finite enumeration exists; the answers below are the analytic ones
    // for exact counts with the usual order.
    sr.flags_ = SemiringFlags{true, true, true, true, true, true};
    return sr;
}

Semiring Semiring::trivial() {
    return finite("trivial", {"*"}, {0}, {0}, {1}, 0, 0);
}

namespace {

/// Build an n×n table from a function.
template <class F>
std::vector<std::uint8_t> table(std::size_t n, F f) {
    std::vector<std::uint8_t> t(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) t[i * n + j] = static_cast<std::uint8_t>(f(i, j));
    return t;
}

} // namespace

Semiring Semiring::boolean_exact() {
    auto add = table(2, [](std::size_t a, std::size_t b) { return (a | b); });
    auto mul = table(2, [](std::size_t a, std::size_t b) { return (a & b); });
    auto leq = table(2, [](std::size_t a, std::size_t b) { return a == b; });
    return finite("boolean", {"0", "1"}, add, mul, leq, 0, 1);
}

Semiring Semiring::boolean_ordered() {
    auto add = table(2, [](std::size_t a, std::size_t b) { return (a | b); });
    auto mul = table(2, [](std::size_t a, std::size_t b) { return (a & b); });
    auto leq = table(2, [](std::size_t a, std::size_t b) { return a <= b; });
    return finite("boolean-ordered", {"0", "1"}, add, mul, leq, 0, 1);
}

Semiring Semiring::linearity() {
    // elements 0,1,w; any sum or product that could exceed one use is w
    enum { Z, O, W };
    auto add = table(3, [](std::size_t a, std::size_t b) -> std::size_t {
        if (a == Z) return b;
        if (b == Z) return a;
        return W; // 1+1 = w, and w absorbs
    });
    auto mul = table(3, [](std::size_t a, std::size_t b) -> std::size_t {
        if (a == Z || b == Z) return Z;
        if (a == O) return b;
        if (b == O) return a;
        return W;
    });
    auto leq = table(3, [](std::size_t a, std::size_t b) {
        return a == b || b == W; // reflexive closure of 0≤w, 1≤w
    });
    return finite("linearity", {"0", "1", "w"}, add, mul, leq, Z, O);
}

Semiring Semiring::five_point() {
    // Read each element as an interval of possible use counts:
    // 0=[0,0], 1=[1,1], Aff=[0,1], Rel=[1,inf], w=[0,inf].  Operations act on
    // intervals pointwise and round to the least representable superset.
    enum { Z, O, A, R, W };
    struct Iv {
        std::uint64_t lo;
        bool inf; // upper bound infinite
        std::uint64_t hi;
    };
    auto iv = [](std::size_t e) -> Iv {
        switch (e) {
        case Z: return {0, false, 0};
        case O: return {1, false, 1};
        case A: return {0, false, 1};
        case R: return {1, true, 0};
        default: return {0, true, 0};
        }
    };
    auto round = [&](Iv v) -> std::size_t {
        for (std::size_t e : {Z, O, A, R, W}) {
            Iv c = iv(e);
            bool lo_ok = c.lo <= v.lo;
            bool hi_ok = c.inf || (!v.inf && v.hi <= c.hi);
            if (lo_ok && hi_ok) return e; // elements listed smallest-first
        }
        return W;
    };
    auto add = table(5, [&](std::size_t a, std::size_t b) {
        Iv x = iv(a), y = iv(b);
        return round({x.lo + y.lo, x.inf || y.inf, x.hi + y.hi});
    });
    auto mul = table(5, [&](std::size_t a, std::size_t b) {
        Iv x = iv(a), y = iv(b);
        bool inf = (x.inf && (y.inf || y.hi > 0)) || (y.inf && (x.inf || x.hi > 0));
        return round({x.lo * y.lo, inf, x.hi * y.hi});
    });
    // order: reflexive-transitive closure of 0≤Aff, 1≤Aff, 1≤Rel, Aff≤w, Rel≤w
    bool base[5][5] = {};
    for (int i = 0; i < 5; ++i) base[i][i] = true;
    base[Z][A] = base[O][A] = base[O][R] = base[A][W] = base[R][W] = true;
    for (int k = 0; k < 5; ++k)
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                if (base[i][k] && base[k][j]) base[i][j] = true;
    auto leq = table(5, [&](std::size_t a, std::size_t b) { return base[a][b]; });
    return finite("five-point", {"0", "1", "Aff", "Rel", "w"}, add, mul, leq, Z, O);
}

Semiring Semiring::lattice_from_string(const std::string& text, const std::string& name) {
    std::vector<std::string> elems;
    std::map<std::string, std::size_t> index;
    std::vector<std::pair<std::size_t, std::size_t>> covers;
    std::string priv, pub;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto cut = line.find("--");
        if (cut != std::string::npos) line.erase(cut);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        if (kw == "elements") {
            std::string e;
            while (ls >> e) {
                if (index.count(e))
                    throw ConfigError(fmt::format("lattice: duplicate element '{}'", e));
                index[e] = elems.size();
                elems.push_back(e);
            }
        } else if (kw == "cover") {
            std::string a, b;
            if (!(ls >> a >> b) || !index.count(a) || !index.count(b))
                throw ConfigError(fmt::format("lattice: bad cover pair on line {}", lineno));
            covers.emplace_back(index[a], index[b]);
        } else if (kw == "private" || kw == "public") {
            std::string e;
            if (!(ls >> e) || !index.count(e))
                throw ConfigError(fmt::format("lattice: bad {} designation", kw));
            (kw == "private" ? priv : pub) = e;
        } else {
            throw ConfigError(fmt::format("lattice: unknown keyword '{}' on line {}", kw, lineno));
        }
    }
    const std::size_t n = elems.size();
    if (n == 0) throw ConfigError("lattice: no elements");
    if (n > kMaxCarrier)
        throw ConfigError(fmt::format("carrier-too-large: {} elements exceeds bound {}", n,
                                      kMaxCarrier));
    if (priv.empty() || pub.empty())
        throw ConfigError("lattice: private and public elements must be designated");

    // order = reflexive-transitive closure of the cover relation
    std::vector<std::uint8_t> ord(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) ord[i * n + i] = 1;
    for (auto [a, b] : covers) ord[a * n + b] = 1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (ord[i * n + k] && ord[k * n + j]) ord[i * n + j] = 1;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && ord[i * n + j] && ord[j * n + i])
                throw ConfigError("lattice: cover relation has a cycle");

    // join/meet tables; both must exist and be unique for every pair
    auto bound = [&](std::size_t a, std::size_t b, bool upper) -> std::size_t {
        std::optional<std::size_t> best;
        for (std::size_t u = 0; u < n; ++u) {
            bool is_bound = upper ? (ord[a * n + u] && ord[b * n + u])
                                  : (ord[u * n + a] && ord[u * n + b]);
            if (!is_bound) continue;
            if (!best) {
                best = u;
                continue;
            }
            if (upper ? ord[u * n + *best] : ord[*best * n + u]) best = u;
        }
        if (!best)
            throw ConfigError(fmt::format("lattice: elements '{}' and '{}' have no {}",
                                          elems[a], elems[b], upper ? "join" : "meet"));
        for (std::size_t u = 0; u < n; ++u) {
            bool is_bound = upper ? (ord[a * n + u] && ord[b * n + u])
                                  : (ord[u * n + a] && ord[u * n + b]);
            bool least = upper ? ord[*best * n + u] : ord[u * n + *best];
            if (is_bound && !least)
                throw ConfigError(fmt::format("lattice: elements '{}' and '{}' lack a least {}",
                                              elems[a], elems[b],
                                              upper ? "upper bound" : "lower bound"));
        }
        return *best;
    };
    std::vector<std::uint8_t> join(n * n), meet(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            join[a * n + b] = static_cast<std::uint8_t>(bound(a, b, true));
            meet[a * n + b] = static_cast<std::uint8_t>(bound(a, b, false));
        }

    // distributivity is required for meet to distribute over join (and is
    // what makes the pair a semiring rather than just a lattice)
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
                auto lhs = meet[a * n + join[b * n + c]];
                auto rhs = join[meet[a * n + b] * n + meet[a * n + c]];
                if (lhs != rhs)
                    throw ConfigError("lattice: not distributive; meet cannot distribute "
                                      "over join");
            }

    std::size_t zi = index[priv], oi = index[pub];
    for (std::size_t i = 0; i < n; ++i) {
        if (!ord[zi * n + i])
            throw ConfigError("lattice: private element must be the bottom");
        if (!ord[i * n + oi]) throw ConfigError("lattice: public element must be the top");
    }
    if (zi == oi) throw ConfigError("lattice: private and public must differ");

    return finite(name, std::move(elems), std::move(join), std::move(meet), std::move(ord),
                  zi, oi);
}

Semiring Semiring::lattice_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open lattice file '{}'", path));
    std::stringstream buf;
    buf << in.rdbuf();
    auto stem = path;
    if (auto slash = stem.find_last_of('/'); slash != std::string::npos)
        stem.erase(0, slash + 1);
    if (auto dot = stem.find_last_of('.'); dot != std::string::npos) stem.erase(dot);
    return lattice_from_string(buf.str(), stem);
}

Semiring Semiring::by_name(const std::string& name) {
    if (name == "nat" || name == "naturals") return naturals();
    if (name == "trivial") return trivial();
    if (name == "boolean" || name == "boolean-exact") return boolean_exact();
    if (name == "boolean-ordered") return boolean_ordered();
    if (name == "linearity") return linearity();
    if (name == "five-point") return five_point();
    if (name.find('/') != std::string::npos ||
        (name.size() > 4 && name.substr(name.size() - 4) == ".lat"))
        return lattice_from_file(name);
    throw ConfigError(fmt::format("unknown semiring '{}'", name));
}

} // namespace grad
