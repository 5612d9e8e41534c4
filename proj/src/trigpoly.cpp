#include "lacsum/trigpoly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace lacsum {

namespace {

double double_of(const std::string& s) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw std::invalid_argument("TrigPolynomial: bad coefficient: " + s);
    return v;
}

}  // namespace

TrigPolynomial& TrigPolynomial::add(long j, const std::string& cos_coeff,
                                    const std::string& sin_coeff) {
    if (j < 1)
        throw std::invalid_argument(
            "TrigPolynomial: frequency j must be >= 1 (no constant term; f has mean zero)");
    for (auto& t : terms_) {
        if (t.j == j) {
            if (!cos_coeff.empty()) {
                t.c = double_of(cos_coeff);
                t.c_rat = rat_from_string(cos_coeff);
            }
            if (!sin_coeff.empty()) {
                t.s = double_of(sin_coeff);
                t.s_rat = rat_from_string(sin_coeff);
            }
            return *this;
        }
    }
    Term t;
    t.j = j;
    if (!cos_coeff.empty()) {
        t.c = double_of(cos_coeff);
        t.c_rat = rat_from_string(cos_coeff);
    }
    if (!sin_coeff.empty()) {
        t.s = double_of(sin_coeff);
        t.s_rat = rat_from_string(sin_coeff);
    }
    terms_.push_back(std::move(t));
    return *this;
}

void TrigPolynomial::finalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.j < b.j; });
    terms_.erase(std::remove_if(terms_.begin(), terms_.end(),
                                [](const Term& t) { return t.c == 0.0 && t.s == 0.0; }),
                 terms_.end());
    if (terms_.empty())
        throw std::invalid_argument("TrigPolynomial: all coefficients are zero");
}

TrigPolynomial TrigPolynomial::parse(const std::string& text) {
    TrigPolynomial f;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        bool is_cos;
        if (item.rfind("cos:", 0) == 0) {
            is_cos = true;
        } else if (item.rfind("sin:", 0) == 0) {
            is_cos = false;
        } else {
            throw std::invalid_argument("TrigPolynomial: bad term (want cos:j=v or sin:j=v): " +
                                        item);
        }
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("TrigPolynomial: missing '=' in term: " + item);
        long j = std::stol(item.substr(4, eq - 4));
        std::string coeff = item.substr(eq + 1);
        if (is_cos)
            f.add(j, coeff, "");
        else
            f.add(j, "", coeff);
    }
    f.finalize();
    return f;
}

std::string TrigPolynomial::format() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        if (t.c != 0.0) {
            if (!first) os << ",";
            os << "cos:" << t.j << "=" << t.c_rat;
            first = false;
        }
        if (t.s != 0.0) {
            if (!first) os << ",";
            os << "sin:" << t.j << "=" << t.s_rat;
            first = false;
        }
    }
    return os.str();
}

TrigPolynomial TrigPolynomial::cosine(long j) {
    TrigPolynomial f;
    f.add(j, "1", "");
    f.finalize();
    return f;
}

TrigPolynomial TrigPolynomial::erdos_fortet() {
    TrigPolynomial f;
    f.add(1, "1", "").add(2, "1", "");
    f.finalize();
    return f;
}

TrigPolynomial TrigPolynomial::dyadic_cosines(int d) {
    if (d < 1) throw std::invalid_argument("dyadic_cosines: d must be >= 1");
    if (d > 40) throw std::invalid_argument("dyadic_cosines: d too large");
    TrigPolynomial f;
    for (int j = 0; j < d; ++j) f.add(1L << j, "1", "");
    f.finalize();
    return f;
}

bool TrigPolynomial::cosine_only() const {
    for (const auto& t : terms_)
        if (t.s != 0.0) return false;
    return true;
}

double TrigPolynomial::l2_norm() const {
    double sum = 0.0;
    for (const auto& t : terms_) sum += t.c * t.c + t.s * t.s;
    return std::sqrt(sum / 2.0);
}

}  // namespace lacsum
