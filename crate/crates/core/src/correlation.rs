//! Exact periodic correlation over the Gaussian integers, and brute-force
//! difference counts between the characteristic sets of `u` and `v`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclotomy::ClassTable;
use crate::error::{invalid, Error, Result};
use crate::number_theory::Class;
use crate::sequences::{Periodic, SequenceKind};

/// Largest period accepted by the `O(L²)` correlation sweep.
pub const MAX_CORRELATION_PERIOD: usize = 20_000;

/// `re + im·ω` with `ω = i`.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct GaussianInt {
    pub re: i64,
    pub im: i64,
}

impl GaussianInt {
    pub const ZERO: GaussianInt = GaussianInt { re: 0, im: 0 };
    pub const ONE: GaussianInt = GaussianInt { re: 1, im: 0 };
    pub const OMEGA: GaussianInt = GaussianInt { re: 0, im: 1 };

    pub const fn new(re: i64, im: i64) -> Self {
        Self { re, im }
    }

    pub const fn real(re: i64) -> Self {
        Self { re, im: 0 }
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn norm_sqr(self) -> i64 {
        self.re * self.re + self.im * self.im
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (re, 0) => write!(f, "{re}"),
            (0, im) => write!(f, "{im}ω"),
            (re, im) if im < 0 => write!(f, "{re}-{}ω", -im),
            (re, im) => write!(f, "{re}+{im}ω"),
        }
    }
}

impl Add for GaussianInt {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl AddAssign for GaussianInt {
    fn add_assign(&mut self, rhs: Self) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl Sub for GaussianInt {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for GaussianInt {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Mul for GaussianInt {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Mul<i64> for GaussianInt {
    type Output = Self;
    fn mul(self, k: i64) -> Self {
        Self::new(self.re * k, self.im * k)
    }
}

impl std::iter::Sum for GaussianInt {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}

/// `ω^e` for `e` taken mod 4.
pub fn omega_power(e: i64) -> GaussianInt {
    match e.rem_euclid(4) {
        0 => GaussianInt::new(1, 0),
        1 => GaussianInt::new(0, 1),
        2 => GaussianInt::new(-1, 0),
        _ => GaussianInt::new(0, -1),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorrelationProfile {
    pub period: usize,
    pub values: Vec<GaussianInt>,
    pub kinds: (SequenceKind, SequenceKind),
}

impl CorrelationProfile {
    /// Value at shift `tau mod period`.
    pub fn at(&self, tau: u64) -> GaussianInt {
        self.values[(tau % self.period as u64) as usize]
    }

    /// The same profile under the other primitive root `ω = −i`.
    pub fn conjugated(&self) -> Self {
        Self {
            period: self.period,
            values: self.values.iter().map(|v| v.conj()).collect(),
            kinds: self.kinds,
        }
    }
}

/// `Σ_n ω^{a(n+τ) − b(n)}` at one shift.
#[inline]
fn correlation_at(a: &[u8], b: &[u8], tau: usize) -> GaussianInt {
    let len = a.len();
    let mut hist = [0i64; 4];
    let (head, tail) = a.split_at(tau);
    for (x, y) in tail.iter().chain(head).zip(&b[..len]) {
        hist[(x.wrapping_sub(*y) & 3) as usize] += 1;
    }
    GaussianInt::new(hist[0] - hist[2], hist[1] - hist[3])
}

fn check_pair(a: &[u8], b: &[u8]) -> Result<()> {
    if a.len() != b.len() {
        return Err(invalid(format!(
            "sequence lengths differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if a.is_empty() {
        return Err(invalid("empty sequence"));
    }
    if a.len() > MAX_CORRELATION_PERIOD {
        return Err(Error::ResourceLimit {
            what: "correlation period",
            size: a.len() as u64,
            cap: MAX_CORRELATION_PERIOD as u64,
        });
    }
    Ok(())
}

/// Periodic cross-correlation `C_{a,b}(τ)` for every `τ`, shifts split across the rayon pool.
pub fn cross_correlation<A, B>(a: &A, b: &B) -> Result<CorrelationProfile>
where
    A: Periodic + ?Sized,
    B: Periodic + ?Sized,
{
    let (sa, sb) = (a.symbols(), b.symbols());
    check_pair(sa, sb)?;
    let values = (0..sa.len())
        .into_par_iter()
        .map(|tau| correlation_at(sa, sb, tau))
        .collect();
    Ok(CorrelationProfile {
        period: sa.len(),
        values,
        kinds: (a.kind(), b.kind()),
    })
}

/// Single-threaded [`cross_correlation`].
pub fn cross_correlation_serial<A, B>(a: &A, b: &B) -> Result<CorrelationProfile>
where
    A: Periodic + ?Sized,
    B: Periodic + ?Sized,
{
    let (sa, sb) = (a.symbols(), b.symbols());
    check_pair(sa, sb)?;
    let values = (0..sa.len())
        .map(|tau| correlation_at(sa, sb, tau))
        .collect();
    Ok(CorrelationProfile {
        period: sa.len(),
        values,
        kinds: (a.kind(), b.kind()),
    })
}

pub fn autocorrelation<A: Periodic + ?Sized>(a: &A) -> Result<CorrelationProfile> {
    cross_correlation(a, a)
}

/// Which pair of characteristic sets a difference count intersects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum DifferenceKind {
    /// `d_u(i, j; τ) = |C_i^{(p^m)} ∩ (C_j^{(p^m)} + τ)|`
    U,
    /// `d_v(i, j; τ) = |C_i^{(2p^m)} ∩ (C_j^{(2p^m)} + 2τ)|`
    V,
    /// `d_{u,v}(i, j; τ) = |2C_i^{(p^m)} ∩ (C_j^{(2p^m)} + 2τ − 1)|`
    UV,
    /// `d_{v,u}(i, j; τ) = |C_i^{(2p^m)} ∩ (2C_j^{(p^m)} + 2τ − 1)|`
    VU,
}

impl DifferenceKind {
    pub const ALL: [DifferenceKind; 4] = [
        DifferenceKind::U,
        DifferenceKind::V,
        DifferenceKind::UV,
        DifferenceKind::VU,
    ];
}

impl fmt::Display for DifferenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DifferenceKind::U => "d_u",
            DifferenceKind::V => "d_v",
            DifferenceKind::UV => "d_uv",
            DifferenceKind::VU => "d_vu",
        })
    }
}

const NOT_ODD: u8 = u8::MAX;

/// Membership arrays for `C_0, C_1` of `Z_{p^m}` and `Z_{2p^m}`, derived from a class table.
#[derive(Debug, Clone)]
pub struct CharacteristicSets {
    q: usize,
    /// `C^{(p^m)}` index of each `x ∈ Z_{p^m}`.
    c_q: Vec<u8>,
    /// `C^{(2p^m)}` index of each odd `x ∈ Z_{2p^m}`; even entries hold a sentinel.
    c_2q: Vec<u8>,
}

impl CharacteristicSets {
    /// `C_0 = D_0`, `C_1 = D_1 ∪ pZ` mod `p^m`; `C_0 = D_0`, `C_1 = D_1 ∪ B` mod `2p^m`
    /// with `B` the odd multiples of `p`.
    pub fn new(table: &ClassTable) -> Self {
        let q = table.params().q() as usize;
        let c_q = (0..q as u64)
            .map(|x| table.class_mod_q(x).map_or(1, Class::index))
            .collect();
        let c_2q = (0..2 * q as u64)
            .map(|x| {
                if x % 2 == 0 {
                    NOT_ODD
                } else {
                    table.class_mod_2q(x).map_or(1, Class::index)
                }
            })
            .collect();
        Self { q, c_q, c_2q }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// `d(i, j; shift)` by counting over the whole ring.
    pub fn count(&self, kind: DifferenceKind, i: Class, j: Class, shift: u64) -> u64 {
        let q = self.q;
        let n = 2 * q;
        let t = (shift % q as u64) as usize;
        let (i, j) = (i.index(), j.index());
        match kind {
            DifferenceKind::U => (0..q)
                .filter(|&x| self.c_q[x] == i && self.c_q[(x + q - t) % q] == j)
                .count() as u64,
            DifferenceKind::V => (1..n)
                .step_by(2)
                .filter(|&x| self.c_2q[x] == i && self.c_2q[(x + n - 2 * t) % n] == j)
                .count() as u64,
            // 2y ∈ 2C_i and 2y − (2t − 1) ∈ C_j^{(2q)}
            DifferenceKind::UV => (0..q)
                .filter(|&y| self.c_q[y] == i && self.c_2q[(2 * y + n + 1 - 2 * t) % n] == j)
                .count() as u64,
            // x ∈ C_i^{(2q)} and x − (2t − 1) = 2y with y ∈ C_j
            DifferenceKind::VU => (1..n)
                .step_by(2)
                .filter(|&x| self.c_2q[x] == i && self.c_q[((x + n + 1 - 2 * t) % n) / 2] == j)
                .count() as u64,
        }
    }
}

/// `d(1, 0; shift)` for the given kind.
pub fn difference_count(kind: DifferenceKind, shift: u64, table: &ClassTable) -> u64 {
    CharacteristicSets::new(table).count(kind, Class::D1, Class::D0, shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number_theory::PrimePowerParams;
    use crate::sequences::{build_s, build_s1};
    use proptest::prelude::*;

    fn params(p: u64, m: u32) -> PrimePowerParams {
        PrimePowerParams::new(p, m).unwrap()
    }

    fn table(p: u64, m: u32) -> ClassTable {
        ClassTable::build(&params(p, m)).unwrap()
    }

    #[test]
    fn omega_powers() {
        assert_eq!(omega_power(0), GaussianInt::new(1, 0));
        assert_eq!(omega_power(2), GaussianInt::new(-1, 0));
        assert_eq!(omega_power(1), GaussianInt::new(0, 1));
        assert_eq!(omega_power(-1), GaussianInt::new(0, -1));
        assert_eq!(
            GaussianInt::OMEGA * GaussianInt::OMEGA,
            GaussianInt::real(-1)
        );
    }

    #[test]
    fn display_forms() {
        assert_eq!(GaussianInt::new(2, 4).to_string(), "2+4ω");
        assert_eq!(GaussianInt::new(-1, -2).to_string(), "-1-2ω");
        assert_eq!(GaussianInt::new(0, 3).to_string(), "3ω");
        assert_eq!(GaussianInt::new(-6, 0).to_string(), "-6");
    }

    #[test]
    fn correlation_examples() {
        let s5 = build_s(&params(5, 1));
        let acf = autocorrelation(&s5).unwrap();
        assert_eq!(acf.values[5], GaussianInt::real(-2));
        assert_eq!(acf.values[0], GaussianInt::real(10));
        let s9 = build_s(&params(3, 2));
        let acf = autocorrelation(&s9).unwrap();
        assert_eq!(acf.values[1], GaussianInt::ZERO);
        assert_eq!(acf.values[3], GaussianInt::real(-6));
        assert_eq!(acf.values[6], GaussianInt::real(18));
        let s1 = build_s1(&params(5, 1));
        assert_eq!(autocorrelation(&s1).unwrap().at(5), GaussianInt::real(5));
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let a = build_s(&params(5, 1));
        let b = build_s1(&params(5, 1));
        assert!(matches!(
            cross_correlation(&a, &b),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn difference_count_examples() {
        assert_eq!(difference_count(DifferenceKind::U, 1, &table(3, 1)), 1);
        assert_eq!(difference_count(DifferenceKind::V, 1, &table(5, 1)), 1);
        assert_eq!(difference_count(DifferenceKind::U, 3, &table(3, 2)), 0);
    }

    // Independent oracle: difference counts from explicit sets.
    fn set_oracle(kind: DifferenceKind, i: u8, j: u8, t: u64, tab: &ClassTable) -> u64 {
        use std::collections::BTreeSet;
        let (p, q) = (tab.params().p(), tab.params().q());
        let n = 2 * q;
        let top = tab.top();
        let cq = |c: u8| -> BTreeSet<u64> {
            if c == 0 {
                top.d_p(Class::D0).iter().copied().collect()
            } else {
                top.d_p(Class::D1)
                    .iter()
                    .copied()
                    .chain((0..q).step_by(p as usize))
                    .collect()
            }
        };
        let c2q = |c: u8| -> BTreeSet<u64> {
            if c == 0 {
                top.d_2p(Class::D0).iter().copied().collect()
            } else {
                top.d_2p(Class::D1)
                    .iter()
                    .copied()
                    .chain((p..n).step_by(2 * p as usize))
                    .collect()
            }
        };
        let shifted = |s: BTreeSet<u64>, by: u64, modulus: u64| -> BTreeSet<u64> {
            s.into_iter().map(|x| (x + by) % modulus).collect()
        };
        let doubled =
            |s: BTreeSet<u64>| -> BTreeSet<u64> { s.into_iter().map(|x| 2 * x).collect() };
        let off = (2 * t + n - 1) % n;
        let (lhs, rhs) = match kind {
            DifferenceKind::U => (cq(i), shifted(cq(j), t % q, q)),
            DifferenceKind::V => (c2q(i), shifted(c2q(j), 2 * t % n, n)),
            DifferenceKind::UV => (doubled(cq(i)), shifted(c2q(j), off, n)),
            DifferenceKind::VU => (c2q(i), shifted(doubled(cq(j)), off, n)),
        };
        lhs.intersection(&rhs).count() as u64
    }

    const GRID: [(u64, u32); 8] = [
        (3, 1),
        (3, 2),
        (5, 1),
        (5, 2),
        (7, 1),
        (11, 1),
        (13, 1),
        (17, 1),
    ];

    proptest! {
        #[test]
        fn counts_match_set_oracle(idx in 0usize..GRID.len(), t in 0u64..300, k in 0usize..4) {
            let (p, m) = GRID[idx];
            let tab = table(p, m);
            let sets = CharacteristicSets::new(&tab);
            let kind = DifferenceKind::ALL[k];
            let mut total = 0;
            for i in Class::BOTH {
                for j in Class::BOTH {
                    let c = sets.count(kind, i, j, t);
                    prop_assert_eq!(c, set_oracle(kind, i.index(), j.index(), t, &tab));
                    total += c;
                }
            }
            prop_assert_eq!(total, tab.params().q());
            prop_assert_eq!(
                sets.count(kind, Class::D1, Class::D0, t),
                sets.count(kind, Class::D0, Class::D1, t)
            );
        }

        #[test]
        fn acf_is_conjugate_symmetric_and_parallel_is_serial(idx in 0usize..GRID.len()) {
            let (p, m) = GRID[idx];
            let s = build_s(&params(p, m));
            let acf = autocorrelation(&s).unwrap();
            let len = acf.period;
            prop_assert_eq!(acf.values[0], GaussianInt::real(len as i64));
            for tau in 1..len {
                prop_assert_eq!(acf.values[len - tau], acf.values[tau].conj());
            }
            prop_assert_eq!(&acf, &cross_correlation_serial(&s, &s).unwrap());
        }

        #[test]
        fn correlation_matches_naive_sum(syms in proptest::collection::vec(0u8..4, 1..40),
                                         other in proptest::collection::vec(0u8..4, 40)) {
            struct Raw(Vec<u8>);
            impl Periodic for Raw {
                fn kind(&self) -> SequenceKind { SequenceKind::S }
                fn symbols(&self) -> &[u8] { &self.0 }
            }
            let len = syms.len();
            let a = Raw(syms);
            let b = Raw(other[..len].to_vec());
            let prof = cross_correlation(&a, &b).unwrap();
            for tau in 0..len {
                let naive: GaussianInt = (0..len)
                    .map(|n| omega_power(a.0[(n + tau) % len] as i64 - b.0[n] as i64))
                    .sum();
                prop_assert_eq!(prof.values[tau], naive);
            }
        }
    }
}
