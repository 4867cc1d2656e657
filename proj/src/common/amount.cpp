// SPDX-License-Identifier: Apache-2.0
#include "intent/common/amount.hpp"

#include <cctype>
#include <stdexcept>

namespace intent {

Amount pow10(unsigned exponent) {
    Amount result = 1;
    for (unsigned i = 0; i < exponent; ++i) {
        result *= 10;
    }
    return result;
}

Amount floorRational(const Rational& value) {
    Amount num = boost::multiprecision::numerator(value);
    Amount den = boost::multiprecision::denominator(value);
    Amount q = num / den;
    if (num % den != 0 && num < 0) {
        q -= 1;
    }
    return q;
}

Rational parseDecimal(std::string_view text) {
    std::size_t i = 0;
    Amount mantissa = 0;
    int fractionDigits = 0;
    bool anyDigit = false;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        mantissa = mantissa * 10 + (text[i] - '0');
        anyDigit = true;
        ++i;
    }
    if (i < text.size() && text[i] == '.') {
        ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            mantissa = mantissa * 10 + (text[i] - '0');
            ++fractionDigits;
            anyDigit = true;
            ++i;
        }
    }
    if (!anyDigit) {
        throw std::invalid_argument("numeric literal has no digits");
    }
    Rational value(mantissa, pow10(static_cast<unsigned>(fractionDigits)));
    if (i < text.size()) {
        char marker = text[i];
        bool binary = marker == 'p' || marker == 'P';
        if (!binary && marker != 'e' && marker != 'E') {
            throw std::invalid_argument("unexpected character in numeric literal");
        }
        ++i;
        bool negative = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            negative = text[i] == '-';
            ++i;
        }
        if (i >= text.size()) {
            throw std::invalid_argument("exponent has no digits");
        }
        unsigned exponent = 0;
        for (; i < text.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
                throw std::invalid_argument("unexpected character in exponent");
            }
            exponent = exponent * 10 + static_cast<unsigned>(text[i] - '0');
            if (exponent > 4096) {
                throw std::invalid_argument("exponent out of range");
            }
        }
        Amount scale = binary ? (Amount(1) << exponent) : pow10(exponent);
        value = negative ? value / Rational(scale) : value * Rational(scale);
    }
    return value;
}

Amount parseAmount(std::string_view text) {
    if (text.empty()) {
        throw std::invalid_argument("empty integer");
    }
    std::size_t i = 0;
    bool negative = false;
    if (text[0] == '-' || text[0] == '+') {
        negative = text[0] == '-';
        i = 1;
    }
    if (i == text.size()) {
        throw std::invalid_argument("integer has no digits");
    }
    Amount value = 0;
    for (; i < text.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
            throw std::invalid_argument("invalid integer: " + std::string(text));
        }
        value = value * 10 + (text[i] - '0');
    }
    return negative ? Amount(-value) : value;
}

std::string toString(const Amount& value) { return value.str(); }

std::string toString(const Rational& value) {
    Amount num = boost::multiprecision::numerator(value);
    Amount den = boost::multiprecision::denominator(value);
    if (den == 1) {
        return num.str();
    }
    return num.str() + "/" + den.str();
}

double toDouble(const Rational& value) { return value.convert_to<double>(); }

Amount isqrt(const Amount& value) {
    if (value < 0) {
        throw std::invalid_argument("isqrt of negative value");
    }
    return boost::multiprecision::sqrt(value);
}

}  // namespace intent
