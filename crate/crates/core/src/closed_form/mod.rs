//! Closed-form predictors for the difference counts, the component
//! auto/cross-correlations, and the autocorrelation of `s`, plus the
//! even/odd decomposition of that autocorrelation into component correlations.
//!
//! Branches are keyed on the class of the shift (or of `2k − 1`) and on
//! `p mod 8`; every class lookup goes through [`fast_class`].

pub mod stated;

use std::fmt;

use serde::Serialize;

use crate::correlation::{cross_correlation, CorrelationProfile, DifferenceKind, GaussianInt};
use crate::cyclotomy::{fast_class, ResidueLabel};
use crate::error::{Error, Result};
use crate::number_theory::{Class, PMod8, PrimePowerParams};
use crate::sequences::{build_s1, build_s2};

/// Class of a shift `k ∈ Z_{p^m}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ShiftLabel {
    Zero,
    /// `k ∈ pZ_{p^{m−1}} \ {0}`
    PMultiple,
    Unit(Class),
}

impl fmt::Display for ShiftLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShiftLabel::Zero => f.write_str("Zero"),
            ShiftLabel::PMultiple => f.write_str("pMultNonzero"),
            ShiftLabel::Unit(c) => write!(f, "D{c}"),
        }
    }
}

/// Class of an odd residue `x ∈ Z_{2p^m}` (always `2k − 1` here).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum OddLabel {
    /// `x ≡ p (mod 2p)`
    PMod2p,
    Unit(Class),
}

impl fmt::Display for OddLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OddLabel::PMod2p => f.write_str("PCase"),
            OddLabel::Unit(c) => write!(f, "D{c}"),
        }
    }
}

/// What a branch of a closed form is keyed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BranchKey {
    Peak,
    Residue(ResidueLabel),
    Shift(ShiftLabel),
    Odd(OddLabel),
}

impl fmt::Display for BranchKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchKey::Peak => f.write_str("peak"),
            BranchKey::Residue(l) => l.fmt(f),
            BranchKey::Shift(l) => l.fmt(f),
            BranchKey::Odd(l) => l.fmt(f),
        }
    }
}

/// The branch of a closed form that an input selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CaseLabel {
    pub key: BranchKey,
    pub p_mod_8: PMod8,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.key.fmt(f)
    }
}

pub fn shift_label(params: &PrimePowerParams, k: u64) -> ShiftLabel {
    let k = k % params.q();
    if k == 0 {
        ShiftLabel::Zero
    } else {
        match fast_class(params, 2 * k) {
            ResidueLabel::TwoUnit(c) => ShiftLabel::Unit(c),
            _ => ShiftLabel::PMultiple,
        }
    }
}

/// Label of the odd residue `x mod 2p^m`.
pub fn odd_label(params: &PrimePowerParams, x: u64) -> OddLabel {
    match fast_class(params, x) {
        ResidueLabel::Unit(c) => OddLabel::Unit(c),
        ResidueLabel::PMod2p => OddLabel::PMod2p,
        other => panic!("{x} is even (label {other})"),
    }
}

/// `2k − 1 mod 2p^m`.
pub fn two_k_minus_one(params: &PrimePowerParams, k: u64) -> u64 {
    let n = params.period();
    (2 * (k % params.q()) + n - 1) % n
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Component {
    S1,
    S2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CrossDirection {
    /// `C_{s1,s2}(k)`
    S1S2,
    /// `C_{s2,s1}(k − 1)`, keyed on `2k − 1` like its partner.
    S2S1,
}

// p^(m-1) * (p + c) / d, with the division exact on every branch that uses it.
fn scaled(params: &PrimePowerParams, c: i64, d: i64) -> i64 {
    let (p, a) = (params.p() as i64, params.lower_power() as i64);
    let num = p + c;
    debug_assert_eq!(num % d, 0, "p={p} c={c} d={d}");
    a * num / d
}

fn scaled_neg(params: &PrimePowerParams, c: i64, d: i64) -> i64 {
    // p^(m-1) * (c - p) / d
    -scaled(params, -c, d)
}

fn key_matters(kind: DifferenceKind) -> bool {
    matches!(kind, DifferenceKind::U | DifferenceKind::V)
}

/// Branch label for a difference-count shift.
pub fn difference_case(kind: DifferenceKind, shift: u64, params: &PrimePowerParams) -> CaseLabel {
    let key = if key_matters(kind) {
        BranchKey::Shift(shift_label(params, shift))
    } else {
        BranchKey::Odd(odd_label(params, two_k_minus_one(params, shift)))
    };
    CaseLabel {
        key,
        p_mod_8: params.p_mod_8(),
    }
}

/// Predicted `d(1, 0; shift)`. For `U` and `V` the shift must be nonzero mod `p^m`.
pub fn predict_difference_count(
    kind: DifferenceKind,
    shift: u64,
    params: &PrimePowerParams,
) -> Result<u64> {
    use PMod8::*;
    let r = params.p_mod_8();
    let v = match kind {
        DifferenceKind::U | DifferenceKind::V => match shift_label(params, shift) {
            ShiftLabel::Zero => {
                return Err(Error::Domain(format!(
                    "{kind} at shift 0 has no closed form"
                )))
            }
            ShiftLabel::PMultiple => 0,
            ShiftLabel::Unit(c) => {
                // d_u splits on p mod 4; d_v on p mod 8, with classes swapped at p ≡ 5.
                let c = if kind == DifferenceKind::V && r == Five {
                    c.other()
                } else {
                    c
                };
                let split = match kind {
                    DifferenceKind::U => r.minus_one_is_square(),
                    _ => matches!(r, One | Five),
                };
                match (split, c) {
                    (true, Class::D0) => scaled(params, 3, 4),
                    (true, Class::D1) => scaled(params, -1, 4),
                    (false, _) => scaled(params, 1, 4),
                }
            }
        },
        DifferenceKind::UV | DifferenceKind::VU => {
            match odd_label(params, two_k_minus_one(params, shift)) {
                OddLabel::PMod2p if r.two_is_square() => 0,
                OddLabel::PMod2p => scaled(params, -1, 2),
                OddLabel::Unit(c) => {
                    let c = if kind == DifferenceKind::VU && r == Three {
                        c.other()
                    } else {
                        c
                    };
                    match (r, c) {
                        (One, Class::D0) => scaled(params, 3, 4),
                        (One, Class::D1) | (Five, _) => scaled(params, -1, 4),
                        (Three, Class::D1) | (Seven, _) => scaled(params, 1, 4),
                        (Three, Class::D0) => scaled(params, -3, 4),
                    }
                }
            }
        }
    };
    Ok(v as u64)
}

/// Predicted `C_{s1}(k)` or `C_{s2}(k)`; `k ≡ 0` gives the peak `p^m`.
pub fn predict_component_acf(which: Component, k: u64, params: &PrimePowerParams) -> GaussianInt {
    use PMod8::*;
    let q = params.q() as i64;
    let a = params.lower_power() as i64;
    let class = match shift_label(params, k) {
        ShiftLabel::Zero | ShiftLabel::PMultiple => return GaussianInt::real(q),
        ShiftLabel::Unit(c) => c,
    };
    let r = params.p_mod_8();
    // `+` is the sign of the 2p^(m-1)ω term on D0 (D1 takes the opposite sign).
    let imaginary = |plus: bool| {
        let sign = if plus == (class == Class::D0) { 1 } else { -1 };
        GaussianInt::new(scaled(params, -5, 2), 2 * a * sign)
    };
    let real_split = |d0: i64, d1: i64| {
        let c = if class == Class::D0 { d0 } else { d1 };
        GaussianInt::real(scaled(params, c, 2))
    };
    match (which, r) {
        (Component::S1, One | Five) | (Component::S2, One) => real_split(-7, -3),
        (Component::S2, Five) => real_split(-3, -7),
        (Component::S1, Three | Seven) | (Component::S2, Seven) => imaginary(true),
        (Component::S2, Three) => imaginary(false),
    }
}

pub fn component_case(k: u64, params: &PrimePowerParams) -> CaseLabel {
    CaseLabel {
        key: BranchKey::Shift(shift_label(params, k)),
        p_mod_8: params.p_mod_8(),
    }
}

/// Predicted cross-correlation for `1 ≤ k ≤ p^m`, keyed on `2k − 1`.
///
/// For [`CrossDirection::S1S2`] this is `C_{s1,s2}(k)`; for
/// [`CrossDirection::S2S1`] it is `C_{s2,s1}(k − 1)`, the term paired with it
/// in the odd-shift decomposition of `C_s`.
pub fn predict_cross_ccf(
    direction: CrossDirection,
    k: u64,
    params: &PrimePowerParams,
) -> GaussianInt {
    use PMod8::*;
    let q = params.q() as i64;
    let a = params.lower_power() as i64;
    let r = params.p_mod_8();
    let class = match odd_label(params, two_k_minus_one(params, k)) {
        OddLabel::PMod2p => {
            return GaussianInt::real(if r.two_is_square() { -q } else { -a });
        }
        OddLabel::Unit(c) => c,
    };
    let pick = |d0: i64, d1: i64| if class == Class::D0 { d0 } else { d1 };
    let sign = |d0_sign: i64| {
        if class == Class::D0 {
            d0_sign
        } else {
            -d0_sign
        }
    };
    match (direction, r) {
        (_, One) => GaussianInt::real(scaled_neg(params, pick(7, 3), 2)),
        (CrossDirection::S1S2, Three) => GaussianInt::real(scaled_neg(params, pick(1, 5), 2)),
        (CrossDirection::S2S1, Three) => GaussianInt::real(scaled_neg(params, pick(5, 1), 2)),
        (CrossDirection::S1S2, Five) => GaussianInt::new(scaled_neg(params, 3, 2), 2 * a * sign(1)),
        (CrossDirection::S2S1, Five) => {
            GaussianInt::new(scaled_neg(params, 3, 2), 2 * a * sign(-1))
        }
        (_, Seven) => GaussianInt::new(scaled_neg(params, 5, 2), 2 * a * sign(-1)),
    }
}

/// `k` in `1..=p^m` whose prediction equals the cross-correlation profile at `shift`.
pub fn cross_k_for_shift(direction: CrossDirection, shift: u64, params: &PrimePowerParams) -> u64 {
    let q = params.q();
    let shift = shift % q;
    match direction {
        CrossDirection::S1S2 if shift == 0 => q,
        CrossDirection::S1S2 => shift,
        CrossDirection::S2S1 => shift + 1,
    }
}

pub fn cross_case(k: u64, params: &PrimePowerParams) -> CaseLabel {
    CaseLabel {
        key: BranchKey::Odd(odd_label(params, two_k_minus_one(params, k))),
        p_mod_8: params.p_mod_8(),
    }
}

/// Predicted `C_s(τ)` for `τ ∈ Z_{2p^m}`.
pub fn predict_acf_s(tau: u64, params: &PrimePowerParams) -> GaussianInt {
    use PMod8::*;
    let q = params.q() as i64;
    let a = params.lower_power() as i64;
    let p = params.p() as i64;
    let r = params.p_mod_8();
    let label = fast_class(params, tau);
    match label {
        ResidueLabel::ZeroMod2p => GaussianInt::real(2 * q),
        ResidueLabel::PMod2p => GaussianInt::real(if r.two_is_square() { -2 * q } else { -2 * a }),
        ResidueLabel::TwoUnit(c) | ResidueLabel::Unit(c) => {
            let two_unit = matches!(label, ResidueLabel::TwoUnit(_));
            let d0 = c == Class::D0;
            match r {
                One => {
                    let off = if d0 { 7 } else { 3 };
                    GaussianInt::real(if two_unit {
                        a * (p - off)
                    } else {
                        a * (off - p)
                    })
                }
                Three | Five => GaussianInt::real(if two_unit { a * (p - 5) } else { a * (3 - p) }),
                Seven => {
                    // +4aω on 2D_0 and D_1, −4aω on 2D_1 and D_0.
                    let im = if two_unit == d0 { 4 * a } else { -4 * a };
                    let re = if two_unit { a * (p - 5) } else { a * (5 - p) };
                    GaussianInt::new(re, im)
                }
            }
        }
    }
}

pub fn acf_case(tau: u64, params: &PrimePowerParams) -> CaseLabel {
    let tau = tau % params.period();
    CaseLabel {
        key: if tau == 0 {
            BranchKey::Peak
        } else {
            BranchKey::Residue(fast_class(params, tau))
        },
        p_mod_8: params.p_mod_8(),
    }
}

/// Brute-force component correlations of `s1`, `s2`, from which `C_s` is reassembled.
#[derive(Debug, Clone)]
pub struct AcfDecomposition {
    params: PrimePowerParams,
    pub acf_s1: CorrelationProfile,
    pub acf_s2: CorrelationProfile,
    pub ccf_s1s2: CorrelationProfile,
    pub ccf_s2s1: CorrelationProfile,
}

impl AcfDecomposition {
    pub fn new(params: &PrimePowerParams) -> Result<Self> {
        let s1 = build_s1(params);
        let s2 = build_s2(params);
        Ok(Self {
            params: *params,
            acf_s1: cross_correlation(&s1, &s1)?,
            acf_s2: cross_correlation(&s2, &s2)?,
            ccf_s1s2: cross_correlation(&s1, &s2)?,
            ccf_s2s1: cross_correlation(&s2, &s1)?,
        })
    }

    /// `C_{s1}(k) + C_{s2}(k)` for `τ = 2k`; `C_{s2,s1}(k − 1) + C_{s1,s2}(k)` for `τ = 2k − 1`.
    pub fn value(&self, tau: u64) -> GaussianInt {
        let tau = tau % self.params.period();
        if tau.is_multiple_of(2) {
            let k = tau / 2;
            self.acf_s1.at(k) + self.acf_s2.at(k)
        } else {
            let k = tau.div_ceil(2);
            self.ccf_s2s1.at(k - 1) + self.ccf_s1s2.at(k)
        }
    }
}

pub fn decompose_acf(tau: u64, params: &PrimePowerParams) -> Result<GaussianInt> {
    Ok(AcfDecomposition::new(params)?.value(tau))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlation::autocorrelation;
    use crate::sequences::build_s;

    fn params(p: u64, m: u32) -> PrimePowerParams {
        PrimePowerParams::new(p, m).unwrap()
    }

    fn first_shift(params: &PrimePowerParams, want: ShiftLabel) -> u64 {
        (1..params.q())
            .find(|&k| shift_label(params, k) == want)
            .unwrap()
    }

    fn first_k_odd(params: &PrimePowerParams, want: OddLabel) -> u64 {
        (1..=params.q())
            .find(|&k| odd_label(params, two_k_minus_one(params, k)) == want)
            .unwrap()
    }

    #[test]
    fn difference_count_predictions() {
        use DifferenceKind::*;
        let p7 = params(7, 1);
        assert_eq!(predict_difference_count(U, 1, &p7), Ok(2));
        assert_eq!(predict_difference_count(U, 3, &params(3, 2)), Ok(0));
        let p5 = params(5, 1);
        let k = first_shift(&p5, ShiftLabel::Unit(Class::D0));
        assert_eq!(predict_difference_count(V, k, &p5), Ok(1));
        let p9 = params(3, 2);
        let k = first_k_odd(&p9, OddLabel::PMod2p);
        assert_eq!(
            predict_difference_count(UV, k, &p9),
            Ok(p9.lower_power() * 2 / 2)
        );
        assert!(matches!(
            predict_difference_count(U, 0, &p7),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            predict_difference_count(V, 9, &p9),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn component_predictions() {
        let p5 = params(5, 1);
        let k = first_shift(&p5, ShiftLabel::Unit(Class::D0));
        assert_eq!(
            predict_component_acf(Component::S1, k, &p5),
            GaussianInt::real(-1)
        );
        assert_eq!(
            predict_component_acf(Component::S1, 3, &params(3, 2)),
            GaussianInt::real(9)
        );
        let p7 = params(7, 1);
        let k = first_shift(&p7, ShiftLabel::Unit(Class::D0));
        assert_eq!(
            predict_component_acf(Component::S2, k, &p7),
            GaussianInt::new(1, 2)
        );
        assert_eq!(
            predict_component_acf(Component::S2, 0, &p7),
            GaussianInt::real(7)
        );
    }

    #[test]
    fn cross_predictions() {
        let p9 = params(3, 2);
        let k = first_k_odd(&p9, OddLabel::PMod2p);
        assert_eq!(
            predict_cross_ccf(CrossDirection::S1S2, k, &p9),
            GaussianInt::real(-3)
        );
        let p5 = params(5, 1);
        let k = first_k_odd(&p5, OddLabel::Unit(Class::D0));
        assert_eq!(
            predict_cross_ccf(CrossDirection::S2S1, k, &p5),
            GaussianInt::new(-1, -2)
        );
        let p17 = params(17, 1);
        let k = first_k_odd(&p17, OddLabel::Unit(Class::D0));
        assert_eq!(
            predict_cross_ccf(CrossDirection::S1S2, k, &p17),
            GaussianInt::real(-5)
        );
    }

    #[test]
    fn acf_predictions() {
        let p9 = params(3, 2);
        assert_eq!(predict_acf_s(6, &p9), GaussianInt::real(18));
        assert_eq!(predict_acf_s(3, &p9), GaussianInt::real(-6));
        assert_eq!(predict_acf_s(0, &p9), GaussianInt::real(18));
        let p7 = params(7, 1);
        let tau = (1..14)
            .find(|&t| fast_class(&p7, t) == ResidueLabel::TwoUnit(Class::D0))
            .unwrap();
        assert_eq!(predict_acf_s(tau, &p7), GaussianInt::new(2, 4));
    }

    #[test]
    fn decomposition_examples() {
        let p9 = params(3, 2);
        assert_eq!(decompose_acf(0, &p9), Ok(GaussianInt::real(18)));
        assert_eq!(decompose_acf(3, &p9), Ok(GaussianInt::real(-6)));
        let p5 = params(5, 1);
        assert_eq!(decompose_acf(2, &p5), Ok(GaussianInt::ZERO));
        assert_eq!(predict_acf_s(2, &p5), GaussianInt::ZERO);
    }

    #[test]
    fn even_shift_prediction_is_sum_of_component_predictions() {
        for (p, m) in [(3, 2), (5, 2), (7, 2), (11, 1), (13, 1), (17, 1), (23, 1)] {
            let pr = params(p, m);
            for k in 1..pr.q() {
                assert_eq!(
                    predict_acf_s(2 * k, &pr),
                    predict_component_acf(Component::S1, k, &pr)
                        + predict_component_acf(Component::S2, k, &pr),
                    "p={p} m={m} k={k}"
                );
            }
            for k in 1..=pr.q() {
                assert_eq!(
                    predict_acf_s(2 * k - 1, &pr),
                    predict_cross_ccf(CrossDirection::S2S1, k, &pr)
                        + predict_cross_ccf(CrossDirection::S1S2, k, &pr),
                    "p={p} m={m} k={k}"
                );
            }
        }
    }

    #[test]
    fn acf_prediction_matches_brute_force_on_small_instances() {
        for (p, m) in [(3, 2), (5, 1), (7, 1), (17, 1)] {
            let pr = params(p, m);
            let acf = autocorrelation(&build_s(&pr)).unwrap();
            for tau in 0..pr.period() {
                assert_eq!(
                    acf.at(tau),
                    predict_acf_s(tau, &pr),
                    "p={p} m={m} tau={tau}"
                );
            }
        }
    }
}
