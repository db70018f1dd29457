#pragma once
/**
 * @file coeff_traits.hpp
 * @brief zero_like / one_like / is_zero overloads so generic code can build constants
 *        in the same ring instance as a sample element.
 */

#include "rsw/cyclotomic.hpp"
#include "rsw/tower.hpp"

namespace rsw {

inline Rational zero_like(const Rational&) { return 0; }
inline Rational one_like(const Rational&) { return 1; }
inline bool is_zero(const Rational& x) { return x == 0; }

inline CycloElt zero_like(const CycloElt& x) { return CycloElt(x.conductor(), 0); }
inline CycloElt one_like(const CycloElt& x) { return CycloElt(x.conductor(), 1); }
inline bool is_zero(const CycloElt& x) { return x.is_zero(); }

inline TowerElt zero_like(const TowerElt& x) { return TowerElt(x.tower(), 0); }
inline TowerElt one_like(const TowerElt& x) { return TowerElt(x.tower(), 1); }
inline bool is_zero(const TowerElt& x) { return x.is_zero(); }

inline Rational inverse(const Rational& x) {
    if (x == 0) throw MathError("inverse of zero rational");
    return 1 / x;
}
inline CycloElt inverse(const CycloElt& x) { return x.inv(); }
inline TowerElt inverse(const TowerElt& x) { return x.inv(); }

/** Multiplication by a rational scalar. */
inline Rational scale(const Rational& x, const Rational& s) { return x * s; }
inline CycloElt scale(const CycloElt& x, const Rational& s) { return x * s; }
inline TowerElt scale(const TowerElt& x, const Rational& s) { return x * s; }

inline std::string to_string(const CycloElt& x) { return x.to_string(); }
inline std::string to_string(const TowerElt& x) { return x.to_string(); }

}  // namespace rsw
