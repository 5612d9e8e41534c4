#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace lacsum {

// Normalizing sequence g_N with 1 <= g_N <= N, both g_N and N/g_N
// nondecreasing over the range it is evaluated on.
class GrowthFunction {
  public:
    enum class Kind { Power, LogPower, IterLog, Table };

    static GrowthFunction power(double alpha) {
        if (alpha < 0.0 || alpha > 1.0)
            throw std::invalid_argument("GrowthFunction::power: alpha must be in [0,1]");
        GrowthFunction g;
        g.kind_ = Kind::Power;
        g.param_ = alpha;
        return g;
    }
    static GrowthFunction sqrt_n() { return power(0.5); }
    static GrowthFunction identity() { return power(1.0); }

    static GrowthFunction log_power(double beta) {
        if (beta <= 0.0) throw std::invalid_argument("GrowthFunction::log_power: beta must be > 0");
        GrowthFunction g;
        g.kind_ = Kind::LogPower;
        g.param_ = beta;
        return g;
    }

    static GrowthFunction iterated_log() {
        GrowthFunction g;
        g.kind_ = Kind::IterLog;
        return g;
    }

    // table[i] = g value at N = i+1
    static GrowthFunction table(std::vector<double> values) {
        GrowthFunction g;
        g.kind_ = Kind::Table;
        g.table_ = std::move(values);
        return g;
    }

    double operator()(double N) const {
        if (N < 1.0) throw std::invalid_argument("GrowthFunction: N must be >= 1");
        double v = 0.0;
        switch (kind_) {
            case Kind::Power: v = std::pow(N, param_); break;
            case Kind::LogPower: v = std::pow(std::log(N), param_); break;
            case Kind::IterLog: v = std::log(std::max(std::log(N), 1.0)); break;
            case Kind::Table: {
                auto idx = static_cast<size_t>(N) - 1;
                if (idx >= table_.size())
                    throw std::invalid_argument("GrowthFunction table: N out of range");
                v = table_[idx];
                break;
            }
        }
        v = std::max(v, 1.0);
        if (v > N) throw std::invalid_argument("GrowthFunction: g_N > N at N=" + std::to_string(N));
        return v;
    }

    Kind kind() const { return kind_; }
    double param() const { return param_; }

    std::string describe() const {
        switch (kind_) {
            case Kind::Power:
                return param_ == 1.0 ? "N" : "N^" + std::to_string(param_);
            case Kind::LogPower: return "(log N)^" + std::to_string(param_);
            case Kind::IterLog: return "log log N";
            case Kind::Table: return "table[" + std::to_string(table_.size()) + "]";
        }
        return "?";
    }

  private:
    Kind kind_ = Kind::Power;
    double param_ = 1.0;
    std::vector<double> table_;
};

}  // namespace lacsum
