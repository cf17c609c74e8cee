#include "capdesc/partitions.hpp"

#include "capdesc/errors.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace capdesc {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i] <= 0) throw PreconditionViolation("partition parts must be positive");
        if (i > 0 && parts_[i] > parts_[i - 1]) throw PreconditionViolation("partition parts must be weakly decreasing");
        size_ += parts_[i];
    }
}

Partition Partition::from_unsorted(std::vector<int> parts) {
    std::erase(parts, 0);
    std::sort(parts.begin(), parts.end(), std::greater<>());
    return Partition(std::move(parts));
}

Partition Partition::conjugate() const {
    std::vector<int> c;
    if (parts_.empty()) return {};
    c.reserve(static_cast<std::size_t>(parts_[0]));
    for (int j = 0; j < parts_[0]; ++j) {
        int count = 0;
        for (int p : parts_)
            if (p > j) ++count;
        c.push_back(count);
    }
    return Partition(std::move(c));
}

std::vector<int> Partition::multiplicities() const {
    std::vector<int> m(static_cast<std::size_t>(parts_.empty() ? 1 : parts_[0] + 1), 0);
    for (int p : parts_) ++m[static_cast<std::size_t>(p)];
    return m;
}

std::string Partition::str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(parts_[i]);
    }
    return s + "]";
}

Partition Partition::parse(const std::string& text) {
    std::vector<int> parts;
    std::size_t pos = 0;
    auto skip = [&] { while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos; };
    skip();
    if (pos >= text.size() || text[pos] != '[') throw ParseError("partition must start with '[': " + text);
    ++pos;
    skip();
    if (pos < text.size() && text[pos] == ']') {
        ++pos;
    } else {
        while (true) {
            skip();
            std::size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (start == pos) throw ParseError("expected part in partition: " + text);
            parts.push_back(std::stoi(text.substr(start, pos - start)));
            skip();
            if (pos < text.size() && text[pos] == ',') { ++pos; continue; }
            if (pos < text.size() && text[pos] == ']') { ++pos; break; }
            throw ParseError("malformed partition: " + text);
        }
    }
    skip();
    if (pos != text.size()) throw ParseError("trailing input after partition: " + text);
    try {
        return Partition(std::move(parts));
    } catch (const PreconditionViolation& e) {
        throw ParseError(std::string(e.what()) + ": " + text);
    }
}

std::strong_ordering operator<=>(const Partition& a, const Partition& b) {
    if (a.size_ != b.size_) return a.size_ <=> b.size_;
    // Lexicographically larger partitions come first.
    return b.parts_ <=> a.parts_;
}

std::vector<Partition> enumerate_partitions(int d) {
    std::vector<Partition> out;
    if (d < 0) return out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int remaining, int max_part) {
        if (remaining == 0) {
            out.emplace_back(cur);
            return;
        }
        for (int p = std::min(remaining, max_part); p >= 1; --p) {
            cur.push_back(p);
            rec(remaining - p, p);
            cur.pop_back();
        }
    };
    rec(d, d);
    return out;
}

std::vector<Partition> partitions_up_to(int max_size) {
    std::vector<Partition> out;
    for (int d = 0; d <= max_size; ++d) {
        auto ps = enumerate_partitions(d);
        out.insert(out.end(), ps.begin(), ps.end());
    }
    return out;
}

long partition_count(int d) {
    if (d < 0) return 0;
    std::vector<long> p(static_cast<std::size_t>(d + 1), 0);
    p[0] = 1;
    for (int n = 1; n <= d; ++n) {
        long acc = 0;
        for (int k = 1;; ++k) {
            const int g1 = k * (3 * k - 1) / 2;
            const int g2 = k * (3 * k + 1) / 2;
            if (g1 > n) break;
            const long sign = (k % 2) ? 1 : -1;
            acc += sign * p[static_cast<std::size_t>(n - g1)];
            if (g2 <= n) acc += sign * p[static_cast<std::size_t>(n - g2)];
        }
        p[static_cast<std::size_t>(n)] = acc;
    }
    return p[static_cast<std::size_t>(d)];
}

mpz_class centralizer_order(const Partition& lambda) {
    mpz_class z = 1;
    const auto m = lambda.multiplicities();
    for (std::size_t i = 1; i < m.size(); ++i) {
        if (!m[i]) continue;
        mpz_class f;
        mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(m[i]));
        mpz_class pw;
        mpz_ui_pow_ui(pw.get_mpz_t(), i, static_cast<unsigned long>(m[i]));
        z *= pw * f;
    }
    return z;
}

Partition shift_down(const Partition& gamma) {
    std::vector<int> parts;
    for (int p : gamma)
        if (p > 1) parts.push_back(p - 1);
    return Partition(std::move(parts));
}

Partition partition_union(const Partition& a, const Partition& b) {
    std::vector<int> parts = a.parts();
    parts.insert(parts.end(), b.begin(), b.end());
    return Partition::from_unsorted(std::move(parts));
}

bool length_order_less(const Partition& a, const Partition& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    if (a.length() != b.length()) return a.length() < b.length();
    return a.parts() < b.parts();
}

std::vector<Partition> length_order(int d) {
    auto ps = enumerate_partitions(d);
    std::sort(ps.begin(), ps.end(), length_order_less);
    return ps;
}

WeightedPartition::WeightedPartition(std::vector<Pair> pairs) : pairs_(std::move(pairs)) {
    for (const auto& [p, w] : pairs_)
        if (p <= 0) throw PreconditionViolation("weighted partition parts must be positive");
    std::sort(pairs_.begin(), pairs_.end(), [](const Pair& x, const Pair& y) {
        if (x.first != y.first) return x.first > y.first;
        return x.second < y.second;
    });
}

int WeightedPartition::size() const {
    int s = 0;
    for (const auto& pr : pairs_) s += pr.first;
    return s;
}

Partition WeightedPartition::shape() const {
    std::vector<int> parts;
    for (const auto& pr : pairs_) parts.push_back(pr.first);
    return Partition(std::move(parts));
}

std::string WeightedPartition::str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
        if (i) s += ',';
        s += "(" + std::to_string(pairs_[i].first) + ",\"" + pairs_[i].second + "\")";
    }
    return s + "]";
}

WeightedPartition WeightedPartition::parse(const std::string& text) {
    std::vector<Pair> pairs;
    std::size_t pos = 0;
    auto skip = [&] { while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos; };
    auto expect = [&](char c) {
        skip();
        if (pos >= text.size() || text[pos] != c)
            throw ParseError(std::string("expected '") + c + "' in weighted partition: " + text);
        ++pos;
    };
    expect('[');
    skip();
    if (pos < text.size() && text[pos] == ']') {
        ++pos;
    } else {
        while (true) {
            expect('(');
            skip();
            std::size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (start == pos) throw ParseError("expected part in weighted partition: " + text);
            const int part = std::stoi(text.substr(start, pos - start));
            expect(',');
            expect('"');
            start = pos;
            while (pos < text.size() && text[pos] != '"') ++pos;
            if (pos >= text.size()) throw ParseError("unterminated label in weighted partition: " + text);
            std::string label = text.substr(start, pos - start);
            ++pos;
            expect(')');
            if (part <= 0) throw ParseError("weighted partition parts must be positive: " + text);
            pairs.emplace_back(part, std::move(label));
            skip();
            if (pos < text.size() && text[pos] == ',') { ++pos; continue; }
            expect(']');
            break;
        }
    }
    skip();
    if (pos != text.size()) throw ParseError("trailing input after weighted partition: " + text);
    return WeightedPartition(std::move(pairs));
}

}  // namespace capdesc
