#include "sigorient/series.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"

namespace sigorient {

namespace {

void enumerate_degree(int num_vars, int degree, std::vector<int>& current, int var,
                      std::vector<std::uint64_t>& out) {
    if (var == num_vars - 1) {
        current[var] = degree;
        out.push_back(SeriesRing::pack(current));
        current[var] = 0;
        return;
    }
    for (int e = degree; e >= 0; --e) {
        current[var] = e;
        enumerate_degree(num_vars, degree - e, current, var + 1, out);
    }
    current[var] = 0;
}

} // namespace

RingPtr SeriesRing::make(std::vector<std::string> variable_names, int degree_cap) {
    return RingPtr(new SeriesRing(std::move(variable_names), degree_cap));
}

SeriesRing::SeriesRing(std::vector<std::string> names, int cap) : names_(std::move(names)), cap_(cap) {
    if (cap_ < 1 || cap_ > kMaxCap) {
        throw std::invalid_argument("degree cap must lie in [1, 15]");
    }
    if (static_cast<int>(names_.size()) > kMaxVariables) {
        throw std::invalid_argument("at most 16 variables are supported");
    }
    std::set<std::string> seen(names_.begin(), names_.end());
    if (seen.size() != names_.size()) {
        throw std::invalid_argument("variable names must be distinct");
    }
    const int r = num_vars();
    if (r == 0) {
        keys_.push_back(0);
        degrees_.push_back(0);
    } else {
        std::vector<int> current(r, 0);
        for (int d = 0; d <= cap_; ++d) {
            const auto before = keys_.size();
            enumerate_degree(r, d, current, 0, keys_);
            degrees_.insert(degrees_.end(), keys_.size() - before, d);
        }
    }
    index_.reserve(keys_.size());
    for (std::size_t i = 0; i < keys_.size(); ++i) {
        index_.emplace(keys_[i], i);
    }
}

int SeriesRing::var_index(std::string_view name) const {
    for (int i = 0; i < num_vars(); ++i) {
        if (names_[i] == name) {
            return i;
        }
    }
    throw std::invalid_argument("unknown variable '" + std::string(name) + "'");
}

bool SeriesRing::has_var(std::string_view name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::vector<int> SeriesRing::exponents(std::size_t idx) const {
    std::vector<int> e(num_vars());
    for (int v = 0; v < num_vars(); ++v) {
        e[v] = exponent(idx, v);
    }
    return e;
}

std::uint64_t SeriesRing::pack(std::span<const int> exponents) {
    std::uint64_t key = 0;
    for (std::size_t v = 0; v < exponents.size(); ++v) {
        if (exponents[v] < 0 || exponents[v] > kMaxCap) {
            throw std::invalid_argument("exponent out of range");
        }
        key |= static_cast<std::uint64_t>(exponents[v]) << (4 * v);
    }
    return key;
}

std::size_t SeriesRing::index_of_key(std::uint64_t key) const {
    auto it = index_.find(key);
    return it == index_.end() ? npos : it->second;
}

std::size_t SeriesRing::index_of(std::span<const int> exponents) const {
    if (static_cast<int>(exponents.size()) != num_vars()) {
        throw std::invalid_argument("exponent vector length does not match the ring");
    }
    int total = 0;
    for (int e : exponents) {
        if (e < 0) {
            throw std::invalid_argument("negative exponent");
        }
        total += e;
    }
    if (total > cap_) {
        return npos;
    }
    return index_of_key(pack(exponents));
}

bool SeriesRing::same_as(const SeriesRing& other) const {
    return this == &other || (cap_ == other.cap_ && names_ == other.names_);
}

void SeriesRing::build_product_table() const {
    const std::size_t n = keys_.size();
    table_offsets_.assign(n + 1, 0);
    std::vector<ProductEntry> entries;
    for (std::size_t i = 0; i < n; ++i) {
        table_offsets_[i] = entries.size();
        const int room = cap_ - degrees_[i];
        for (std::size_t j = 0; j < n && degrees_[j] <= room; ++j) {
            const std::size_t out = index_of_key(keys_[i] + keys_[j]);
            entries.push_back({static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(out)});
        }
    }
    table_offsets_[n] = entries.size();
    table_ = std::move(entries);
}

std::span<const SeriesRing::ProductEntry> SeriesRing::products_of(std::size_t idx) const {
    std::call_once(table_once_, [this] { build_product_table(); });
    return {table_.data() + table_offsets_[idx], table_.data() + table_offsets_[idx + 1]};
}

// ---------------------------------------------------------------------------

TruncatedSeries::TruncatedSeries(RingPtr ring) : ring_(std::move(ring)) {
    if (!ring_) {
        throw std::invalid_argument("null ring");
    }
    coeffs_.assign(ring_->size(), cplx{});
}

TruncatedSeries::TruncatedSeries(RingPtr ring, std::vector<cplx> coefficients)
    : ring_(std::move(ring)), coeffs_(std::move(coefficients)) {
    if (!ring_) {
        throw std::invalid_argument("null ring");
    }
    if (coeffs_.size() > ring_->size()) {
        throw std::invalid_argument("more coefficients than monomials below the cap");
    }
    coeffs_.resize(ring_->size(), cplx{});
}

TruncatedSeries TruncatedSeries::constant(RingPtr ring, cplx value) {
    TruncatedSeries s(std::move(ring));
    s.coeffs_[0] = value;
    return s;
}

TruncatedSeries TruncatedSeries::variable(RingPtr ring, std::string_view name) {
    const int v = ring->var_index(name);
    return variable(std::move(ring), v);
}

TruncatedSeries TruncatedSeries::variable(RingPtr ring, int var) {
    if (var < 0 || var >= ring->num_vars()) {
        throw std::invalid_argument("variable index out of range");
    }
    TruncatedSeries s(ring);
    s.coeffs_[ring->index_of_key(std::uint64_t{1} << (4 * var))] = 1.0;
    return s;
}

cplx TruncatedSeries::coefficient(std::span<const int> exponents) const {
    const auto idx = ring_->index_of(exponents);
    return idx == SeriesRing::npos ? cplx{} : coeffs_[idx];
}

void TruncatedSeries::set_coefficient(std::span<const int> exponents, cplx value) {
    const auto idx = ring_->index_of(exponents);
    if (idx == SeriesRing::npos) {
        throw std::invalid_argument("monomial exceeds the degree cap");
    }
    coeffs_[idx] = value;
}

int TruncatedSeries::valuation(double tol) const {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (std::abs(coeffs_[i]) > tol) {
            return ring_->degree(i);
        }
    }
    return -1;
}

double TruncatedSeries::max_abs() const {
    double m = 0.0;
    for (const auto& c : coeffs_) {
        m = std::max(m, std::abs(c));
    }
    return m;
}

cplx TruncatedSeries::evaluate(std::span<const cplx> point) const {
    const int r = ring_->num_vars();
    if (static_cast<int>(point.size()) != r) {
        throw std::invalid_argument("evaluation point has the wrong dimension");
    }
    cplx total{};
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == cplx{}) {
            continue;
        }
        cplx term = coeffs_[i];
        for (int v = 0; v < r; ++v) {
            const int e = ring_->exponent(i, v);
            if (e > 0) {
                term *= std::pow(point[v], e);
            }
        }
        total += term;
    }
    return total;
}

void TruncatedSeries::require_same_ring(const TruncatedSeries& other) const {
    if (!ring_->same_as(*other.ring_)) {
        throw std::invalid_argument("series belong to different rings");
    }
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& other) {
    require_same_ring(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        coeffs_[i] += other.coeffs_[i];
    }
    return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& other) {
    require_same_ring(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        coeffs_[i] -= other.coeffs_[i];
    }
    return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(cplx scalar) {
    for (auto& c : coeffs_) {
        c *= scalar;
    }
    return *this;
}

TruncatedSeries TruncatedSeries::operator-() const {
    TruncatedSeries r(*this);
    for (auto& c : r.coeffs_) {
        c = -c;
    }
    return r;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    a.require_same_ring(b);
    const auto count_nonzero = [](const std::vector<cplx>& v) {
        return std::count_if(v.begin(), v.end(), [](const cplx& c) { return c != cplx{}; });
    };
    // Drive the loop from the sparser factor; the product table is symmetric.
    const bool swap = count_nonzero(b.coeffs_) < count_nonzero(a.coeffs_);
    const auto& outer = swap ? b.coeffs_ : a.coeffs_;
    const auto& inner = swap ? a.coeffs_ : b.coeffs_;
    const SeriesRing& ring = *a.ring_;
    std::vector<cplx> out(ring.size(), cplx{});
    for (std::size_t i = 0; i < outer.size(); ++i) {
        const cplx ai = outer[i];
        if (ai == cplx{}) {
            continue;
        }
        for (const auto& e : ring.products_of(i)) {
            out[e.out] += ai * inner[e.other];
        }
    }
    return TruncatedSeries(a.ring_, std::move(out));
}

TruncatedSeries add(const TruncatedSeries& a, const TruncatedSeries& b) { return a + b; }
TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b) { return a * b; }
TruncatedSeries scale(const TruncatedSeries& a, cplx s) { return a * s; }

TruncatedSeries series_exp(const TruncatedSeries& s) {
    const cplx c0 = s.constant_term();
    TruncatedSeries t = s;
    t[0] = 0.0;
    const int cap = s.ring()->degree_cap();
    TruncatedSeries r = TruncatedSeries::constant(s.ring(), 1.0);
    for (int k = cap; k >= 1; --k) {
        r = (t * r) * cplx(1.0 / k, 0.0) + cplx(1.0);
    }
    return r * std::exp(c0);
}

TruncatedSeries series_invert(const TruncatedSeries& s, double unit_tol) {
    const cplx c0 = s.constant_term();
    if (!(std::abs(c0) > unit_tol)) {
        throw NonUnitError("cannot invert a series whose constant term vanishes");
    }
    // 1/s = (1/c0) * sum_k (-t)^k with t = s/c0 - 1
    TruncatedSeries t = s * (1.0 / c0);
    t[0] = 0.0;
    const TruncatedSeries neg_t = -t;
    const int cap = s.ring()->degree_cap();
    TruncatedSeries r = TruncatedSeries::constant(s.ring(), 1.0);
    for (int k = 0; k < cap; ++k) {
        r = neg_t * r + cplx(1.0);
    }
    return r * (1.0 / c0);
}

TruncatedSeries series_pow(const TruncatedSeries& s, int exponent, double unit_tol) {
    TruncatedSeries base = exponent < 0 ? series_invert(s, unit_tol) : s;
    int e = exponent < 0 ? -exponent : exponent;
    TruncatedSeries result = TruncatedSeries::constant(s.ring(), 1.0);
    while (e > 0) {
        if (e & 1) {
            result = result * base;
        }
        e >>= 1;
        if (e > 0) {
            base = base * base;
        }
    }
    return result;
}

TruncatedSeries compose_univariate(std::span<const cplx> coeffs, const TruncatedSeries& arg) {
    if (arg.constant_term() != cplx{}) {
        throw std::invalid_argument("composition argument must have zero constant term");
    }
    const int cap = arg.ring()->degree_cap();
    const int top = std::min<int>(cap, static_cast<int>(coeffs.size()) - 1);
    TruncatedSeries r(arg.ring());
    if (top < 0) {
        return r;
    }
    r[0] = coeffs[top];
    for (int k = top - 1; k >= 0; --k) {
        r = r * arg + coeffs[k];
    }
    return r;
}

namespace {

bool involves(const TruncatedSeries& s, int var) {
    const SeriesRing& ring = *s.ring();
    for (std::size_t i = 0; i < ring.size(); ++i) {
        if (s[i] != cplx{} && ring.exponent(i, var) != 0) {
            return true;
        }
    }
    return false;
}

// When no image mentions another substituted variable, the simultaneous
// substitution equals one Horner pass per variable, each costing cap sparse
// products. Works in the union of the source and target variables.
std::optional<TruncatedSeries> substitute_sequential(const TruncatedSeries& s, const RingPtr& target,
                                                     const std::map<std::string, TruncatedSeries>& assignments) {
    const SeriesRing& src = *s.ring();
    std::vector<std::string> names = target->names();
    for (const auto& name : src.names()) {
        if (!target->has_var(name)) {
            if (!assignments.contains(name)) {
                return std::nullopt;
            }
            names.push_back(name);
        }
    }
    if (static_cast<int>(names.size()) > SeriesRing::kMaxVariables) {
        return std::nullopt;
    }
    for (const auto& [name, img] : assignments) {
        for (const auto& [other, unused] : assignments) {
            if (other != name && target->has_var(other) && involves(img, target->var_index(other))) {
                return std::nullopt;
            }
        }
    }
    const RingPtr work = names.size() == static_cast<std::size_t>(target->num_vars())
                             ? target
                             : SeriesRing::make(names, target->degree_cap());
    TruncatedSeries c = embed(s, work);
    for (const auto& [name, img] : assignments) {
        const TruncatedSeries image = embed(img, work);
        int top = 0;
        const int v = work->var_index(name);
        for (std::size_t i = 0; i < work->size(); ++i) {
            if (c[i] != cplx{}) {
                top = std::max(top, work->exponent(i, v));
            }
        }
        TruncatedSeries r = coefficient_in(c, name, top);
        for (int k = top - 1; k >= 0; --k) {
            r = r * image + coefficient_in(c, name, k);
        }
        c = std::move(r);
    }
    if (work == target) {
        return c;
    }
    // Eliminated variables no longer occur; drop them.
    TruncatedSeries out(target);
    std::vector<int> e(target->num_vars());
    for (std::size_t i = 0; i < work->size(); ++i) {
        if (c[i] == cplx{}) {
            continue;
        }
        for (int v = 0; v < target->num_vars(); ++v) {
            e[v] = work->exponent(i, v);
        }
        out[target->index_of(e)] = c[i];
    }
    return out;
}

} // namespace

TruncatedSeries substitute(const TruncatedSeries& s, const RingPtr& target,
                           const std::map<std::string, TruncatedSeries>& assignments) {
    const SeriesRing& src = *s.ring();
    for (const auto& [name, img] : assignments) {
        if (!src.has_var(name)) {
            throw std::invalid_argument("unknown variable '" + name + "' in substitution");
        }
        if (!img.ring()->same_as(*target)) {
            throw std::invalid_argument("substitution image is not over the target ring");
        }
        if (img.constant_term() != cplx{}) {
            throw std::invalid_argument("substitution image must have zero constant term");
        }
    }
    if (auto fast = substitute_sequential(s, target, assignments)) {
        return std::move(*fast);
    }
    std::vector<TruncatedSeries> images;
    images.reserve(src.num_vars());
    for (int v = 0; v < src.num_vars(); ++v) {
        auto it = assignments.find(src.names()[v]);
        if (it != assignments.end()) {
            images.push_back(it->second);
        } else {
            images.push_back(TruncatedSeries::variable(target, target->var_index(src.names()[v])));
        }
    }

    // Images of monomials degree by degree: image(m) = image(m / v) * image(v)
    // with v the first variable dividing m.
    TruncatedSeries result = TruncatedSeries::constant(target, s.constant_term());
    std::unordered_map<std::uint64_t, TruncatedSeries> previous;
    previous.emplace(0, TruncatedSeries::constant(target, 1.0));
    const int cap = std::min(src.degree_cap(), target->degree_cap());
    std::size_t idx = 1;
    for (int d = 1; d <= src.degree_cap(); ++d) {
        std::unordered_map<std::uint64_t, TruncatedSeries> current;
        const bool need_next = d < src.degree_cap();
        for (; idx < src.size() && src.degree(idx) == d; ++idx) {
            if (d > cap && !need_next) {
                break;
            }
            const std::uint64_t key = src.key(idx);
            int v = 0;
            while (((key >> (4 * v)) & 0xFu) == 0) {
                ++v;
            }
            const std::uint64_t parent = key - (std::uint64_t{1} << (4 * v));
            auto pit = previous.find(parent);
            TruncatedSeries img = pit->second * images[v];
            if (s[idx] != cplx{}) {
                result += img * s[idx];
            }
            if (need_next) {
                current.emplace(key, std::move(img));
            }
        }
        previous = std::move(current);
    }
    return result;
}

TruncatedSeries substitute_shift(const TruncatedSeries& s,
                                 const std::map<std::string, TruncatedSeries>& assignments) {
    return substitute(s, s.ring(), assignments);
}

TruncatedSeries embed(const TruncatedSeries& s, const RingPtr& target) {
    const SeriesRing& src = *s.ring();
    std::vector<int> where(src.num_vars());
    for (int v = 0; v < src.num_vars(); ++v) {
        where[v] = target->var_index(src.names()[v]);
    }
    TruncatedSeries r(target);
    std::vector<int> e(target->num_vars());
    for (std::size_t i = 0; i < src.size(); ++i) {
        if (s[i] == cplx{} || src.degree(i) > target->degree_cap()) {
            continue;
        }
        std::fill(e.begin(), e.end(), 0);
        for (int v = 0; v < src.num_vars(); ++v) {
            e[where[v]] = src.exponent(i, v);
        }
        r[target->index_of(e)] = s[i];
    }
    return r;
}

TruncatedSeries homogeneous_part(const TruncatedSeries& s, int degree) {
    TruncatedSeries r(s.ring());
    for (std::size_t i = 0; i < r.ring()->size(); ++i) {
        if (r.ring()->degree(i) == degree) {
            r[i] = s[i];
        }
    }
    return r;
}

TruncatedSeries coefficient_in(const TruncatedSeries& s, std::string_view var, int power) {
    const SeriesRing& ring = *s.ring();
    const int v = ring.var_index(var);
    const std::uint64_t shift = static_cast<std::uint64_t>(power) << (4 * v);
    TruncatedSeries r(s.ring());
    for (std::size_t i = 0; i < ring.size(); ++i) {
        if (ring.exponent(i, v) == power) {
            r[ring.index_of_key(ring.key(i) - shift)] = s[i];
        }
    }
    return r;
}

TruncatedSeries restrict_to_zero(const TruncatedSeries& s, std::string_view var) {
    const int v = s.ring()->var_index(var);
    TruncatedSeries r = s;
    for (std::size_t i = 0; i < r.ring()->size(); ++i) {
        if (r.ring()->exponent(i, v) > 0) {
            r[i] = 0.0;
        }
    }
    return r;
}

TruncatedSeries permute_vars(const TruncatedSeries& s, std::span<const int> image) {
    const SeriesRing& ring = *s.ring();
    const int r = ring.num_vars();
    if (static_cast<int>(image.size()) != r) {
        throw std::invalid_argument("permutation length does not match the ring");
    }
    std::vector<bool> hit(r, false);
    for (int v : image) {
        if (v < 0 || v >= r || hit[v]) {
            throw std::invalid_argument("not a permutation of the ring variables");
        }
        hit[v] = true;
    }
    TruncatedSeries out(s.ring());
    std::vector<int> e(r);
    for (std::size_t i = 0; i < ring.size(); ++i) {
        if (s[i] == cplx{}) {
            continue;
        }
        for (int v = 0; v < r; ++v) {
            e[image[v]] = ring.exponent(i, v);
        }
        out[ring.index_of_key(SeriesRing::pack(e))] = s[i];
    }
    return out;
}

bool is_invariant(const TruncatedSeries& s, std::span<const std::vector<int>> generators, double tol) {
    for (const auto& g : generators) {
        if (max_abs_diff(permute_vars(s, g), s) > tol) {
            return false;
        }
    }
    return true;
}

double max_abs_diff(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (!a.ring()->same_as(*b.ring())) {
        throw std::invalid_argument("series belong to different rings");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < a.ring()->size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

double scaled_diff(const TruncatedSeries& a, const TruncatedSeries& b) {
    return max_abs_diff(a, b) / std::max(1.0, b.max_abs());
}

cplx proportionality(const TruncatedSeries& a, const TruncatedSeries& b, double* residual) {
    if (!a.ring()->same_as(*b.ring())) {
        throw std::invalid_argument("series belong to different rings");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < b.ring()->size(); ++i) {
        if (std::abs(b[i]) > std::abs(b[best])) {
            best = i;
        }
    }
    if (b[best] == cplx{}) {
        throw NonUnitError("proportionality against the zero series");
    }
    const cplx c = a[best] / b[best];
    if (residual) {
        const double denom = std::max(a.max_abs(), 1e-300);
        *residual = max_abs_diff(a, b * c) / denom;
    }
    return c;
}

std::string series_to_json(const TruncatedSeries& s, double zero_tol) {
    nlohmann::json arr = nlohmann::json::array();
    const SeriesRing& ring = *s.ring();
    for (std::size_t i = 0; i < ring.size(); ++i) {
        if (std::abs(s[i]) <= zero_tol && !(zero_tol == 0.0 && s[i] != cplx{})) {
            continue;
        }
        arr.push_back({{"exponent", ring.exponents(i)}, {"re", s[i].real()}, {"im", s[i].imag()}});
    }
    return arr.dump();
}

std::string series_to_text(const TruncatedSeries& s, double zero_tol) {
    std::ostringstream os;
    os.precision(17);
    const SeriesRing& ring = *s.ring();
    bool first = true;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        if (std::abs(s[i]) <= zero_tol && !(zero_tol == 0.0 && s[i] != cplx{})) {
            continue;
        }
        if (!first) {
            os << " + ";
        }
        first = false;
        os << "(" << s[i].real() << (s[i].imag() < 0 ? "" : "+") << s[i].imag() << "i)";
        for (int v = 0; v < ring.num_vars(); ++v) {
            const int e = ring.exponent(i, v);
            if (e == 1) {
                os << "*" << ring.names()[v];
            } else if (e > 1) {
                os << "*" << ring.names()[v] << "^" << e;
            }
        }
    }
    if (first) {
        os << "0";
    }
    return os.str();
}

} // namespace sigorient
