#pragma once

#include <doctest.h>

#include "mdr/common.hpp"
#include "mdr/metric.hpp"

#define CHECK_ERRC(expr, errc)                                              \
    do {                                                                    \
        bool thrown_ = false;                                               \
        try {                                                               \
            (void)(expr);                                                   \
        } catch (const mdr::Error& e_) {                                    \
            thrown_ = true;                                                 \
            CHECK_MESSAGE(e_.code() == (errc), mdr::errc_name(e_.code())); \
        }                                                                   \
        CHECK_MESSAGE(thrown_, "expected " #errc);                          \
    } while (0)

inline mdr::FiniteMetric metric_of(std::initializer_list<std::initializer_list<double>> rows)
{
    const int n = static_cast<int>(rows.size());
    mdr::Matrix d(n, n);
    int i = 0;
    for (const auto& r : rows) {
        int j = 0;
        for (double v : r) d(i, j++) = v;
        ++i;
    }
    return mdr::FiniteMetric::build(d);
}

inline mdr::PointCloud cloud_of(mdr::Matrix coords, mdr::Norm::Kind kind = mdr::Norm::l2)
{
    mdr::PointCloud c;
    c.coords = std::move(coords);
    c.norm.kind = kind;
    return c;
}
