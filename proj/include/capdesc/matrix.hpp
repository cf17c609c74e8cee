#pragma once

#include "capdesc/bigq.hpp"
#include "capdesc/rational_function.hpp"

#include <Eigen/Core>

namespace Eigen {

template <>
struct NumTraits<capdesc::BigQ> : GenericNumTraits<capdesc::BigQ> {
    using Real = capdesc::BigQ;
    using NonInteger = capdesc::BigQ;
    using Nested = capdesc::BigQ;
    using Literal = capdesc::BigQ;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 2,
        AddCost = 20,
        MulCost = 40
    };
};

template <>
struct NumTraits<capdesc::RationalFunction3> : GenericNumTraits<capdesc::RationalFunction3> {
    using Real = capdesc::RationalFunction3;
    using NonInteger = capdesc::RationalFunction3;
    using Nested = capdesc::RationalFunction3;
    using Literal = capdesc::RationalFunction3;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 4,
        AddCost = 400,
        MulCost = 800
    };
};

}  // namespace Eigen

namespace capdesc {

// Dense exact matrices; the scalar is a field element (BigQ or RF3).
template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatQ = Mat<BigQ>;
using MatRF = Mat<RationalFunction3>;

template <class Scalar>
Mat<Scalar> zero_matrix(Eigen::Index rows, Eigen::Index cols) {
    return Mat<Scalar>::Constant(rows, cols, Scalar(0));
}

}  // namespace capdesc
