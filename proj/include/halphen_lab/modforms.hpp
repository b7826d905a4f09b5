#ifndef HALPHEN_LAB_MODFORMS_HPP
#define HALPHEN_LAB_MODFORMS_HPP

#include "halphen_lab/types.hpp"

namespace hl {

cplx dedekind_eta(const ModularPoint& tau, const QTruncation& trunc = {});

/// Holomorphic Eisenstein series E_k for k in {2, 4, 6}.
cplx eisenstein_holo(int k, const ModularPoint& tau, const QTruncation& trunc = {});

/// Classical Jacobi theta function j in {1,2,3,4}; theta_1 is theta[1;1].
cplx theta(int j, cplx v, const ModularPoint& tau, const QTruncation& trunc = {});

cplx theta_char(const ThetaChar& ch, cplx v, const ModularPoint& tau, const QTruncation& trunc = {});

/// d/dv of theta_char, summed term by term.
cplx theta_char_vderiv(const ThetaChar& ch, cplx v, const ModularPoint& tau, const QTruncation& trunc = {});

/// d/dtau of theta_char at fixed v.
cplx theta_char_tauderiv(const ThetaChar& ch, cplx v, const ModularPoint& tau, const QTruncation& trunc = {});

ModularPoint apply_moebius(const Moebius& m, const ModularPoint& tau);

/// Theta constants theta_2, theta_3, theta_4 at v = 0.
struct ThetaConstants {
    cplx t2, t3, t4;
};

ThetaConstants theta_constants(const ModularPoint& tau, const QTruncation& trunc = {});

} // namespace hl

#endif
