#include "hyplab/tree.hpp"

#include <algorithm>
#include <numeric>

namespace hyplab::tree {

Word::Word(std::span<const Letter> letters) {
    letters_.reserve(letters.size());
    for (Letter l : letters) {
        if (l == 0) throw InvalidWord("letter 0 is not a generator");
        if (!letters_.empty() && letters_.back() == inverse(l))
            letters_.pop_back();
        else
            letters_.push_back(l);
    }
}

Word Word::unchecked(std::vector<Letter> letters) {
    Word w;
    w.letters_ = std::move(letters);
    return w;
}

Word Word::prefix(std::size_t n) const {
    n = std::min(n, letters_.size());
    return unchecked(std::vector<Letter>(letters_.begin(), letters_.begin() + static_cast<long>(n)));
}

std::string letter_string(Letter l) {
    int g = generator_index(l);
    char c = static_cast<char>((l > 0 ? 'a' : 'A') + g);
    return std::string(1, c);
}

std::string to_string(const Word& w) {
    if (w.empty()) return "e";
    std::string s;
    for (Letter l : w.letters()) s += letter_string(l);
    return s;
}

std::vector<Letter> parse_letters(std::string_view text, int rank) {
    std::vector<Letter> out;
    std::size_t i = 0;
    auto starts_with = [&](std::string_view tok) { return text.substr(i, tok.size()) == tok; };
    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '*' || c == '.') { ++i; continue; }
        if (c == 'e' && rank < 5 && text.size() == 1) { ++i; continue; }  // identity
        Letter l = 0;
        if (c >= 'a' && c <= 'z') l = static_cast<Letter>(c - 'a' + 1);
        else if (c >= 'A' && c <= 'Z') l = static_cast<Letter>(-(c - 'A' + 1));
        else throw InvalidWord(std::string("invalid letter '") + c + "'");
        if (generator_index(l) >= rank)
            throw InvalidWord(std::string("letter '") + c + "' outside rank " + std::to_string(rank));
        ++i;
        if (starts_with("^-1")) { l = inverse(l); i += 3; }
        else if (starts_with("⁻¹")) { l = inverse(l); i += std::string_view("⁻¹").size(); }
        out.push_back(l);
    }
    return out;
}

Word parse_word(std::string_view text, int rank) {
    auto letters = parse_letters(text, rank);
    return Word(letters);
}

Word reduce(std::span<const Letter> letters, int rank) {
    for (Letter l : letters)
        if (l == 0 || generator_index(l) >= rank)
            throw InvalidWord("letter outside rank " + std::to_string(rank));
    return Word(letters);
}

bool is_reduced(std::span<const Letter> letters) {
    for (std::size_t i = 0; i < letters.size(); ++i) {
        if (letters[i] == 0) return false;
        if (i > 0 && letters[i] == inverse(letters[i - 1])) return false;
    }
    return true;
}

Word multiply(const Word& a, const Word& b) {
    std::vector<Letter> v(a.letters());
    v.insert(v.end(), b.letters().begin(), b.letters().end());
    return Word(v);
}

Word inverse(const Word& w) {
    std::vector<Letter> v(w.letters().rbegin(), w.letters().rend());
    for (auto& l : v) l = inverse(l);
    return Word::unchecked(std::move(v));
}

std::size_t common_prefix(const Word& a, const Word& b) {
    std::size_t n = std::min(a.size(), b.size());
    std::size_t i = 0;
    while (i < n && a[i] == b[i]) ++i;
    return i;
}

int distance(const Word& u, const Word& v) {
    return static_cast<int>(u.size() + v.size() - 2 * common_prefix(u, v));
}

bool is_cyclically_reduced(const Word& w) {
    return w.size() <= 1 || w[0] != inverse(w.back());
}

namespace {

bool lex_less(const std::vector<Letter>& a, std::size_t ia, const std::vector<Letter>& b, std::size_t ib,
              std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        int x = letter_order(a[(ia + k) % n]);
        int y = letter_order(b[(ib + k) % n]);
        if (x != y) return x < y;
    }
    return false;
}

}  // namespace

Word least_rotation(const Word& w) {
    const auto& v = w.letters();
    std::size_t n = v.size();
    if (n == 0) return w;
    std::size_t best = 0;
    for (std::size_t r = 1; r < n; ++r)
        if (lex_less(v, r, v, best, n)) best = r;
    std::vector<Letter> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = v[(best + k) % n];
    return Word::unchecked(std::move(out));
}

bool is_proper_power(const Word& w) {
    std::size_t n = w.size();
    for (std::size_t p = 1; p < n; ++p) {
        if (n % p != 0) continue;
        bool periodic = true;
        for (std::size_t i = p; i < n && periodic; ++i) periodic = w[i] == w[i - p];
        if (periodic) return true;
    }
    return false;
}

CyclicWord make_cyclic(const Word& cyclically_reduced) {
    if (!is_cyclically_reduced(cyclically_reduced)) throw InvalidWord("word is not cyclically reduced");
    return CyclicWord{least_rotation(cyclically_reduced)};
}

CyclicReduction cyclic_reduce(const Word& w) {
    CyclicReduction r;
    if (w.empty()) {
        r.identity = true;
        return r;
    }
    std::size_t i = 0, j = w.size();
    while (j - i >= 2 && w[i] == inverse(w[j - 1])) {
        ++i;
        --j;
    }
    r.conjugator = w.prefix(i);
    r.core = Word::unchecked(std::vector<Letter>(w.letters().begin() + static_cast<long>(i),
                                                 w.letters().begin() + static_cast<long>(j)));
    r.cls = CyclicWord{least_rotation(r.core)};
    return r;
}

namespace {

// Depth-first walk producing all reduced extensions of `buf` of exact length `target`
// in letter_order order.
void extend_exact(int rank, std::vector<Letter>& buf, std::size_t target,
                  const std::function<void(const Word&)>& visit) {
    if (buf.size() == target) {
        visit(Word::unchecked(buf));
        return;
    }
    for (int o = 0; o < 2 * rank; ++o) {
        Letter l = letter_from_order(o);
        if (!buf.empty() && buf.back() == inverse(l)) continue;
        buf.push_back(l);
        extend_exact(rank, buf, target, visit);
        buf.pop_back();
    }
}

}  // namespace

void ball_enumerate(int rank, int radius, const std::function<void(const Word&)>& visit) {
    ball_enumerate_with_prefix(rank, radius, Word{}, visit);
}

void ball_enumerate_with_prefix(int rank, int radius, const Word& prefix,
                                const std::function<void(const Word&)>& visit) {
    if (radius < 0) return;
    std::vector<Letter> buf;
    for (int n = static_cast<int>(prefix.size()); n <= radius; ++n) {
        buf = prefix.letters();
        extend_exact(rank, buf, static_cast<std::size_t>(n), visit);
    }
}

std::vector<Word> partition_prefixes(int rank, int depth) {
    std::vector<Word> out;
    std::vector<Letter> buf;
    extend_exact(rank, buf, static_cast<std::size_t>(depth), [&](const Word& w) { out.push_back(w); });
    return out;
}

std::uint64_t sphere_count(int rank, int n) {
    if (n == 0) return 1;
    std::uint64_t c = 2 * static_cast<std::uint64_t>(rank);
    for (int i = 1; i < n; ++i) c *= static_cast<std::uint64_t>(2 * rank - 1);
    return c;
}

std::uint64_t ball_count(int rank, int radius) {
    std::uint64_t total = 0;
    for (int n = 0; n <= radius; ++n) total += sphere_count(rank, n);
    return total;
}

Rational boundary_cylinder_measure(const Word& prefix, int rank) {
    if (prefix.empty()) throw InvalidWord("cylinder prefix must be nonempty");
    for (Letter l : prefix.letters())
        if (generator_index(l) >= rank) throw InvalidWord("letter outside rank");
    return Rational(1, 2 * rank) * Rational::pow(2 * rank - 1, -static_cast<int>(prefix.size() - 1));
}

// ---- boundary -------------------------------------------------------------

BoundaryPoint::BoundaryPoint(Word prefix, Word cycle) : prefix_(std::move(prefix)), cycle_(std::move(cycle)) {
    if (!cycle_.empty()) {
        if (!is_cyclically_reduced(cycle_)) throw InvalidWord("boundary cycle must be cyclically reduced");
        if (!prefix_.empty() && prefix_.back() == inverse(cycle_[0]))
            throw InvalidWord("boundary continuation cancels against prefix");
    }
}

BoundaryPoint BoundaryPoint::cylinder(Word prefix) { return BoundaryPoint(std::move(prefix), Word{}); }

BoundaryPoint BoundaryPoint::parse(std::string_view prefix, std::string_view cycle, int rank) {
    auto c = parse_letters(cycle, rank);
    if (!is_reduced(c)) throw InvalidWord("boundary cycle must be reduced");
    return BoundaryPoint(parse_word(prefix, rank), Word(c));
}

Letter BoundaryPoint::letter(std::size_t i) const {
    if (i < prefix_.size()) return prefix_[i];
    if (cycle_.empty()) throw std::out_of_range("cylinder boundary point has no letter beyond its prefix");
    return cycle_[(i - prefix_.size()) % cycle_.size()];
}

Word BoundaryPoint::head(std::size_t n) const {
    std::vector<Letter> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = letter(i);
    return Word::unchecked(std::move(v));
}

std::string BoundaryPoint::str() const {
    std::string s = prefix_.empty() ? "" : to_string(prefix_);
    if (!cycle_.empty()) s += "(" + to_string(cycle_) + ")^inf";
    else s += "...";
    return s;
}

bool operator==(const BoundaryPoint& a, const BoundaryPoint& b) {
    if (a.is_cylinder() || b.is_cylinder())
        return a.is_cylinder() == b.is_cylinder() && a.prefix_ == b.prefix_;
    std::size_t n = std::max(a.prefix_.size(), b.prefix_.size()) +
                    std::lcm(a.cycle_.size(), b.cycle_.size());
    for (std::size_t i = 0; i < n; ++i)
        if (a.letter(i) != b.letter(i)) return false;
    return true;
}

std::size_t common_prefix(const Word& w, const BoundaryPoint& xi) {
    std::size_t i = 0;
    std::size_t limit = xi.is_cylinder() ? std::min(w.size(), xi.prefix().size()) : w.size();
    while (i < limit && w[i] == xi.letter(i)) ++i;
    return i;
}

std::optional<std::size_t> common_prefix(const BoundaryPoint& a, const BoundaryPoint& b) {
    if (a.is_cylinder() || b.is_cylinder()) {
        std::size_t n = std::min(a.prefix().size(), b.prefix().size());
        std::size_t i = common_prefix(a.prefix(), b.prefix());
        if (i == n) return std::nullopt;  // nested cylinders: not distinguishable
        return i;
    }
    if (a == b) return std::nullopt;
    std::size_t i = 0;
    while (a.letter(i) == b.letter(i)) ++i;
    return i;
}

Word ray_point(const Word& p, const BoundaryPoint& xi, long t) {
    if (t < 0) throw std::out_of_range("ray parameter must be nonnegative");
    std::size_t j = common_prefix(p, xi);
    long up = static_cast<long>(p.size() - j);
    if (t <= up) return p.prefix(p.size() - static_cast<std::size_t>(t));
    return xi.head(j + static_cast<std::size_t>(t - up));
}

Word line_point(const BoundaryPoint& xi, const BoundaryPoint& eta, long t) {
    auto j = common_prefix(xi, eta);
    if (!j) throw std::invalid_argument("line endpoints coincide");
    if (t >= 0) return eta.head(*j + static_cast<std::size_t>(t));
    return xi.head(*j + static_cast<std::size_t>(-t));
}

Word segment_point(const Word& p, const Word& q, long t) {
    std::size_t j = common_prefix(p, q);
    long up = static_cast<long>(p.size() - j);
    long total = up + static_cast<long>(q.size() - j);
    if (t < 0 || t > total) throw std::out_of_range("segment parameter outside [0, d(p,q)]");
    if (t <= up) return p.prefix(p.size() - static_cast<std::size_t>(t));
    return q.prefix(j + static_cast<std::size_t>(t - up));
}

long busemann(const Word& q, const Word& p, const BoundaryPoint& xi) {
    long t = static_cast<long>(p.size() + q.size());
    if (xi.is_cylinder()) {
        // Constant once the ray has passed the cylinder's prefix beyond q's branch.
        std::size_t need = p.size() + q.size();
        if (xi.prefix().size() < need)
            throw std::invalid_argument("cylinder too shallow for an exact Busemann value");
    }
    return static_cast<long>(distance(q, ray_point(p, xi, t))) - t;
}

long gromov_beta(const Word& p, const BoundaryPoint& xi, const BoundaryPoint& eta, long q_time) {
    Word q = line_point(xi, eta, q_time);
    return -(busemann(q, p, xi) + busemann(q, p, eta));
}

BoundaryPoint act(const Word& g, const BoundaryPoint& xi) {
    Word u = multiply(g, xi.prefix());
    if (xi.is_cylinder()) {
        // The image is a cylinder only when the cancellation stops inside the prefix.
        std::size_t cancelled = (g.size() + xi.prefix().size() - u.size()) / 2;
        if (cancelled >= xi.prefix().size())
            throw std::invalid_argument("image of cylinder is not a cylinder");
        return BoundaryPoint::cylinder(u);
    }
    const auto& c = xi.cycle().letters();
    std::vector<Letter> v(u.letters());
    std::size_t reps = u.size() / c.size() + 2;
    for (std::size_t r = 0; r < reps; ++r) v.insert(v.end(), c.begin(), c.end());
    return BoundaryPoint(Word(v), xi.cycle());
}

}  // namespace hyplab::tree
