//! Generalized cyclotomic classes of order 2 modulo `p^j` and `2p^j`, the
//! residue partition of `Z_{2p^m}`, and cyclotomic numbers.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::number_theory::{euler_class, mul_mod, Class, PrimePowerParams};

/// Largest period for which a class table is built.
pub const MAX_TABLE_PERIOD: u64 = 1_000_000;

/// Which piece of the partition of `Z_{2p^m}` a residue falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ResidueLabel {
    /// `n ≡ 0 (mod 2p)`
    ZeroMod2p,
    /// `n ≡ p (mod 2p)`
    PMod2p,
    /// `n ∈ D_i^{(2p^m)}`
    Unit(Class),
    /// `n ∈ 2D_i^{(p^m)}`
    TwoUnit(Class),
}

impl fmt::Display for ResidueLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidueLabel::ZeroMod2p => f.write_str("ZeroMod2p"),
            ResidueLabel::PMod2p => f.write_str("PMod2p"),
            ResidueLabel::Unit(c) => write!(f, "Unit2pm({c})"),
            ResidueLabel::TwoUnit(c) => write!(f, "TwoUnit({c})"),
        }
    }
}

/// The classes `D_i^{(p^j)}` and `D_i^{(2p^j)}` at one level `j`, as sorted residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelClasses {
    level: u32,
    prime_power: u64,
    d_p: [Vec<u64>; 2],
    d_2p: [Vec<u64>; 2],
}

impl LevelClasses {
    fn enumerate(g: u64, p: u64, level: u32) -> Self {
        let pj = p.pow(level);
        let half = pj / p * (p - 1) / 2;
        let cosets = |modulus: u64| {
            let g2 = mul_mod(g, g, modulus);
            let mut d0 = Vec::with_capacity(half as usize);
            let mut x = 1 % modulus;
            for _ in 0..half {
                d0.push(x);
                x = mul_mod(x, g2, modulus);
            }
            let mut d1: Vec<u64> = d0.iter().map(|&y| mul_mod(y, g, modulus)).collect();
            d0.sort_unstable();
            d1.sort_unstable();
            [d0, d1]
        };
        Self {
            level,
            prime_power: pj,
            d_p: cosets(pj),
            d_2p: cosets(2 * pj),
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// `p^j`.
    pub fn prime_power(&self) -> u64 {
        self.prime_power
    }

    /// `D_i^{(p^j)}`.
    pub fn d_p(&self, class: Class) -> &[u64] {
        &self.d_p[class.index() as usize]
    }

    /// `D_i^{(2p^j)}`.
    pub fn d_2p(&self, class: Class) -> &[u64] {
        &self.d_2p[class.index() as usize]
    }

    /// `2D_i^{(p^j)} ⊂ Z_{2p^j}`, sorted.
    pub fn two_d_p(&self, class: Class) -> Vec<u64> {
        let mut v: Vec<u64> = self.d_p(class).iter().map(|&x| 2 * x).collect();
        v.sort_unstable();
        v
    }
}

/// Enumerated classes for every level `1 ≤ j ≤ m` plus a residue labelling of `Z_{2p^m}`.
///
/// Everything here comes from iterating powers of `g`; [`fast_class`] is the
/// independent route through Euler's criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassTable {
    params: PrimePowerParams,
    levels: Vec<LevelClasses>,
    class_mod_q: Vec<Option<Class>>,
    class_mod_2q: Vec<Option<Class>>,
    labels: Vec<ResidueLabel>,
}

pub fn build_class_table(params: &PrimePowerParams) -> Result<ClassTable> {
    ClassTable::build(params)
}

impl ClassTable {
    pub fn build(params: &PrimePowerParams) -> Result<Self> {
        let n = params.period();
        if n > MAX_TABLE_PERIOD {
            return Err(Error::ResourceLimit {
                what: "class table period",
                size: n,
                cap: MAX_TABLE_PERIOD,
            });
        }
        let (p, q) = (params.p(), params.q());
        let levels: Vec<LevelClasses> = (1..=params.m())
            .map(|j| LevelClasses::enumerate(params.g(), p, j))
            .collect();
        let top = levels.last().expect("m >= 1");

        let mut class_mod_q = vec![None; q as usize];
        let mut class_mod_2q = vec![None; n as usize];
        for c in Class::BOTH {
            for &x in top.d_p(c) {
                class_mod_q[x as usize] = Some(c);
            }
            for &x in top.d_2p(c) {
                class_mod_2q[x as usize] = Some(c);
            }
        }

        let labels = (0..n)
            .map(|r| match r % (2 * p) {
                0 => ResidueLabel::ZeroMod2p,
                x if x == p => ResidueLabel::PMod2p,
                _ if r % 2 == 1 => {
                    ResidueLabel::Unit(class_mod_2q[r as usize].expect("odd unit is classed"))
                }
                _ => ResidueLabel::TwoUnit(
                    class_mod_q[(r / 2) as usize]
                        .expect("half of an even unit multiple is classed"),
                ),
            })
            .collect();

        Ok(Self {
            params: *params,
            levels,
            class_mod_q,
            class_mod_2q,
            labels,
        })
    }

    pub fn params(&self) -> &PrimePowerParams {
        &self.params
    }

    /// Classes at level `j`, `1 ≤ j ≤ m`.
    pub fn level(&self, j: u32) -> Option<&LevelClasses> {
        j.checked_sub(1).and_then(|i| self.levels.get(i as usize))
    }

    pub fn levels(&self) -> &[LevelClasses] {
        &self.levels
    }

    pub fn top(&self) -> &LevelClasses {
        self.levels.last().expect("m >= 1")
    }

    /// Class of `x mod p^m`, or `None` when `p | x`.
    pub fn class_mod_q(&self, x: u64) -> Option<Class> {
        self.class_mod_q[(x % self.params.q()) as usize]
    }

    /// Class of `x mod 2p^m`, or `None` when `x` is not a unit.
    pub fn class_mod_2q(&self, x: u64) -> Option<Class> {
        self.class_mod_2q[(x % self.params.period()) as usize]
    }

    /// Label of `n mod 2p^m` from the enumerated classes.
    pub fn classify(&self, n: u64) -> ResidueLabel {
        self.labels[(n % self.params.period()) as usize]
    }

    pub fn labels(&self) -> &[ResidueLabel] {
        &self.labels
    }

    pub fn fast_class(&self, n: u64) -> ResidueLabel {
        fast_class(&self.params, n)
    }

    /// How many pieces of the multi-level decomposition
    /// `Z_{2p^m} = ⋃_j p^{m−j}(D_0^{(2p^j)} ∪ D_1^{(2p^j)} ∪ 2D_0^{(p^j)} ∪ 2D_1^{(p^j)}) ∪ {0, p^m}`
    /// contain each residue. A partition gives all ones.
    pub fn partition_cover(&self) -> Vec<u32> {
        let n = self.params.period();
        let m = self.params.m();
        let mut cover = vec![0u32; n as usize];
        for lvl in &self.levels {
            let scale = self.params.p_pow(m - lvl.level());
            for c in Class::BOTH {
                for &x in lvl.d_2p(c) {
                    cover[(scale * x % n) as usize] += 1;
                }
                for &x in lvl.d_p(c) {
                    cover[(2 * scale * x % n) as usize] += 1;
                }
            }
        }
        cover[0] += 1;
        cover[self.params.q() as usize] += 1;
        cover
    }

    /// `(i, j)_{p^m} = |(D_i^{(p^m)} + 1) ∩ D_j^{(p^m)}|` by direct intersection.
    pub fn cyclotomic_number(&self, i: Class, j: Class) -> u64 {
        let q = self.params.q();
        self.top()
            .d_p(i)
            .iter()
            .filter(|&&x| self.class_mod_q((x + 1) % q) == Some(j))
            .count() as u64
    }
}

/// Label of `n mod 2p^m` via Euler's criterion on `n mod p` (or `n/2 mod p`).
pub fn fast_class(params: &PrimePowerParams, n: u64) -> ResidueLabel {
    let p = params.p();
    let n = n % params.period();
    let r = n % (2 * p);
    if r == 0 {
        ResidueLabel::ZeroMod2p
    } else if r == p {
        ResidueLabel::PMod2p
    } else if n % 2 == 1 {
        ResidueLabel::Unit(euler_class(n % p, p))
    } else {
        ResidueLabel::TwoUnit(euler_class((n / 2) % p, p))
    }
}

pub fn classify(n: u64, table: &ClassTable) -> ResidueLabel {
    table.classify(n)
}

pub fn cyclotomic_number_bf(i: Class, j: Class, table: &ClassTable) -> u64 {
    table.cyclotomic_number(i, j)
}

/// Closed-form cyclotomic numbers of order 2 with respect to `p^m`.
pub fn cyclotomic_number_cf(i: Class, j: Class, params: &PrimePowerParams) -> u64 {
    let (p, a) = (params.p(), params.lower_power());
    if params.p_mod_8().minus_one_is_square() {
        match (i, j) {
            (Class::D0, Class::D0) => a * (p - 5) / 4,
            _ => a * (p - 1) / 4,
        }
    } else {
        match (i, j) {
            (Class::D0, Class::D1) => a * (p + 1) / 4,
            _ => a * (p - 3) / 4,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number_theory::odd_primitive_roots;
    use std::collections::BTreeSet;

    fn table(p: u64, m: u32) -> ClassTable {
        ClassTable::build(&PrimePowerParams::new(p, m).unwrap()).unwrap()
    }

    #[test]
    fn example_classes_for_18() {
        let t = table(3, 2);
        assert_eq!(t.top().d_2p(Class::D0), &[1, 7, 13]);
        assert_eq!(t.top().d_2p(Class::D1), &[5, 11, 17]);
        assert_eq!(t.top().two_d_p(Class::D0), vec![2, 8, 14]);
        assert_eq!(t.top().two_d_p(Class::D1), vec![4, 10, 16]);
        assert_eq!(table(5, 2).top().d_p(Class::D0).len(), 10);
    }

    #[test]
    fn classify_examples() {
        let t = table(3, 2);
        assert_eq!(t.classify(9), ResidueLabel::PMod2p);
        assert_eq!(t.classify(1), ResidueLabel::Unit(Class::D0));
        assert_eq!(t.classify(4), ResidueLabel::TwoUnit(Class::D1));
        assert_eq!(t.fast_class(13), ResidueLabel::Unit(Class::D0));
        assert_eq!(t.fast_class(10), ResidueLabel::TwoUnit(Class::D1));
        assert_eq!(t.fast_class(12), ResidueLabel::ZeroMod2p);
    }

    #[test]
    fn cyclotomic_number_examples() {
        assert_eq!(table(5, 1).cyclotomic_number(Class::D0, Class::D0), 0);
        assert_eq!(table(3, 2).cyclotomic_number(Class::D0, Class::D1), 3);
        assert_eq!(table(7, 1).cyclotomic_number(Class::D1, Class::D1), 1);
        let p5 = PrimePowerParams::new(5, 1).unwrap();
        let p9 = PrimePowerParams::new(3, 2).unwrap();
        let p13 = PrimePowerParams::new(13, 1).unwrap();
        assert_eq!(cyclotomic_number_cf(Class::D0, Class::D0, &p5), 0);
        assert_eq!(cyclotomic_number_cf(Class::D0, Class::D1, &p9), 3);
        assert_eq!(cyclotomic_number_cf(Class::D1, Class::D0, &p13), 3);
    }

    #[test]
    fn size_cap_is_an_error() {
        let params = PrimePowerParams::new(101, 3).unwrap();
        assert!(matches!(
            ClassTable::build(&params),
            Err(Error::ResourceLimit { .. })
        ));
    }

    // Independent oracle: squares of all units, enumerated by brute force.
    fn squares_mod(n: u64) -> BTreeSet<u64> {
        (1..n)
            .filter(|&x| crate::number_theory::gcd(x, n) == 1)
            .map(|x| x * x % n)
            .collect()
    }

    #[test]
    fn d0_is_the_square_class_at_every_level() {
        for (p, m) in [(3, 3), (5, 2), (7, 2), (11, 1), (13, 2)] {
            let t = table(p, m);
            for lvl in t.levels() {
                let pj = lvl.prime_power();
                let d0: BTreeSet<u64> = lvl.d_p(Class::D0).iter().copied().collect();
                assert_eq!(d0, squares_mod(pj));
                let d0_2: BTreeSet<u64> = lvl.d_2p(Class::D0).iter().copied().collect();
                assert_eq!(d0_2, squares_mod(2 * pj));
                let half = (pj / p * (p - 1) / 2) as usize;
                for c in Class::BOTH {
                    assert_eq!(lvl.d_p(c).len(), half);
                    assert_eq!(lvl.d_2p(c).len(), half);
                }
            }
        }
    }

    #[test]
    fn partition_and_fast_class() {
        for (p, m) in [(3, 1), (3, 3), (5, 2), (7, 2), (17, 1)] {
            let t = table(p, m);
            assert!(t.partition_cover().iter().all(|&c| c == 1), "p={p} m={m}");
            for n in 0..t.params().period() {
                assert_eq!(t.classify(n), t.fast_class(n));
            }
        }
    }

    #[test]
    fn table_is_independent_of_the_root() {
        for (p, m) in [(7, 2), (11, 1), (13, 2)] {
            let t = table(p, m);
            for g in odd_primitive_roots(p, m).unwrap().take(4) {
                let alt =
                    ClassTable::build(&PrimePowerParams::with_root(p, m, g).unwrap()).unwrap();
                assert_eq!(alt.levels(), t.levels());
                assert_eq!(alt.labels(), t.labels());
            }
        }
    }

    #[test]
    fn closed_and_brute_cyclotomic_numbers_agree() {
        for (p, m) in [(3, 3), (5, 2), (7, 2), (11, 2), (13, 1), (17, 2), (29, 1)] {
            let t = table(p, m);
            for i in Class::BOTH {
                for j in Class::BOTH {
                    assert_eq!(
                        t.cyclotomic_number(i, j),
                        cyclotomic_number_cf(i, j, t.params()),
                        "({i},{j}) p={p} m={m}"
                    );
                }
            }
            let total: u64 = Class::BOTH
                .iter()
                .flat_map(|&i| Class::BOTH.map(|j| t.cyclotomic_number(i, j)))
                .sum();
            let a = t.params().lower_power();
            assert_eq!(total, a * (p - 2));
        }
    }
}
