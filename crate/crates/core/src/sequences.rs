//! The five sequences of the family: `s` of period `2p^m`, its even/odd
//! halves `s1`, `s2` of period `p^m`, and the binary helpers `u`, `v`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::cyclotomy::{fast_class, ResidueLabel};
use crate::error::{invalid, Error};
use crate::number_theory::{euler_class, PrimePowerParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceKind {
    S,
    S1,
    S2,
    U,
    V,
}

impl SequenceKind {
    pub const ALL: [SequenceKind; 5] = [
        SequenceKind::S,
        SequenceKind::S1,
        SequenceKind::S2,
        SequenceKind::U,
        SequenceKind::V,
    ];

    pub fn is_binary(self) -> bool {
        matches!(self, SequenceKind::U | SequenceKind::V)
    }
}

impl fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SequenceKind::S => "s",
            SequenceKind::S1 => "s1",
            SequenceKind::S2 => "s2",
            SequenceKind::U => "u",
            SequenceKind::V => "v",
        })
    }
}

impl FromStr for SequenceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "s" => Ok(SequenceKind::S),
            "s1" => Ok(SequenceKind::S1),
            "s2" => Ok(SequenceKind::S2),
            "u" => Ok(SequenceKind::U),
            "v" => Ok(SequenceKind::V),
            other => Err(invalid(format!("unknown sequence {other:?}"))),
        }
    }
}

/// A periodic sequence whose symbols live in `Z_4`.
pub trait Periodic {
    fn kind(&self) -> SequenceKind;
    fn symbols(&self) -> &[u8];

    fn period(&self) -> usize {
        self.symbols().len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuaternarySequence {
    params: PrimePowerParams,
    kind: SequenceKind,
    symbols: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinarySequence {
    params: PrimePowerParams,
    kind: SequenceKind,
    symbols: Vec<u8>,
}

impl QuaternarySequence {
    pub fn params(&self) -> &PrimePowerParams {
        &self.params
    }
}

impl BinarySequence {
    pub fn params(&self) -> &PrimePowerParams {
        &self.params
    }
}

impl Periodic for QuaternarySequence {
    fn kind(&self) -> SequenceKind {
        self.kind
    }
    fn symbols(&self) -> &[u8] {
        &self.symbols
    }
}

impl Periodic for BinarySequence {
    fn kind(&self) -> SequenceKind {
        self.kind
    }
    fn symbols(&self) -> &[u8] {
        &self.symbols
    }
}

/// Either alphabet, for callers that pick the sequence at run time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sequence {
    Quaternary(QuaternarySequence),
    Binary(BinarySequence),
}

impl Periodic for Sequence {
    fn kind(&self) -> SequenceKind {
        match self {
            Sequence::Quaternary(s) => s.kind(),
            Sequence::Binary(s) => s.kind(),
        }
    }
    fn symbols(&self) -> &[u8] {
        match self {
            Sequence::Quaternary(s) => s.symbols(),
            Sequence::Binary(s) => s.symbols(),
        }
    }
}

pub fn build_sequence(kind: SequenceKind, params: &PrimePowerParams) -> Sequence {
    match kind {
        SequenceKind::S => Sequence::Quaternary(build_s(params)),
        SequenceKind::S1 => Sequence::Quaternary(build_s1(params)),
        SequenceKind::S2 => Sequence::Quaternary(build_s2(params)),
        SequenceKind::U => Sequence::Binary(build_u(params)),
        SequenceKind::V => Sequence::Binary(build_v(params)),
    }
}

/// `s(n)`: 0, 2 on `n ≡ 0, p (mod 2p)`; 0, 1 on `D_0^{(2p^m)}`, `D_1^{(2p^m)}`;
/// 2, 3 on `2D_0^{(p^m)}`, `2D_1^{(p^m)}`.
pub fn build_s(params: &PrimePowerParams) -> QuaternarySequence {
    let symbols = (0..params.period())
        .map(|n| match fast_class(params, n) {
            ResidueLabel::ZeroMod2p => 0,
            ResidueLabel::PMod2p => 2,
            ResidueLabel::Unit(c) => c.index(),
            ResidueLabel::TwoUnit(c) => 2 + c.index(),
        })
        .collect();
    QuaternarySequence {
        params: *params,
        kind: SequenceKind::S,
        symbols,
    }
}

/// `s1(n)`: 0 on multiples of `p`, 2 on `D_0^{(p^m)}`, 3 on `D_1^{(p^m)}`.
pub fn build_s1(params: &PrimePowerParams) -> QuaternarySequence {
    let p = params.p();
    let symbols = (0..params.q())
        .map(|n| match n % p {
            0 => 0,
            r => 2 + euler_class(r, p).index(),
        })
        .collect();
    QuaternarySequence {
        params: *params,
        kind: SequenceKind::S1,
        symbols,
    }
}

/// `s2(n)`: 2 when `2n+1 ≡ p (mod 2p)`, else 0 or 1 by the class of `2n+1` in `Z_{2p^m}`.
pub fn build_s2(params: &PrimePowerParams) -> QuaternarySequence {
    let p = params.p();
    let symbols = (0..params.q())
        .map(|n| match (2 * n + 1) % p {
            0 => 2,
            r => euler_class(r, p).index(),
        })
        .collect();
    QuaternarySequence {
        params: *params,
        kind: SequenceKind::S2,
        symbols,
    }
}

/// `u(n) = 1` exactly on `C_1^{(p^m)} = D_1^{(p^m)} ∪ pZ_{p^m}` (0 included).
pub fn build_u(params: &PrimePowerParams) -> BinarySequence {
    let p = params.p();
    let symbols = (0..params.q())
        .map(|n| match n % p {
            0 => 1,
            r => euler_class(r, p).index(),
        })
        .collect();
    BinarySequence {
        params: *params,
        kind: SequenceKind::U,
        symbols,
    }
}

/// `v(n) = 1` exactly when `2n+1 mod 2p^m` lies in `C_1^{(2p^m)} = B ∪ D_1^{(2p^m)}`,
/// where `B = {p, 3p, …, (2p^{m−1} − 1)p}` is the set of odd multiples of `p`.
pub fn build_v(params: &PrimePowerParams) -> BinarySequence {
    let p = params.p();
    let symbols = (0..params.q())
        .map(|n| match (2 * n + 1) % p {
            0 => 1,
            r => euler_class(r, p).index(),
        })
        .collect();
    BinarySequence {
        params: *params,
        kind: SequenceKind::V,
        symbols,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BalanceStats {
    pub counts: [usize; 4],
    pub balanced: bool,
}

pub fn balance_stats(seq: &impl Periodic) -> BalanceStats {
    let mut counts = [0usize; 4];
    for &s in seq.symbols() {
        counts[(s % 4) as usize] += 1;
    }
    let max = counts.iter().max().copied().unwrap_or(0);
    let min = counts.iter().min().copied().unwrap_or(0);
    BalanceStats {
        counts,
        balanced: max - min <= 1,
    }
}

/// Class label of the index `n` as each builder sees it: the residue label of
/// `n` for `s`, of `n mod p^m` for `s1`/`u`, and of `2n+1` for `s2`/`v`.
pub fn index_label(kind: SequenceKind, params: &PrimePowerParams, n: u64) -> String {
    let p = params.p();
    match kind {
        SequenceKind::S => fast_class(params, n).to_string(),
        SequenceKind::S1 | SequenceKind::U => match n % p {
            0 => "pZ".to_string(),
            r => format!("D{}", euler_class(r, p)),
        },
        SequenceKind::S2 | SequenceKind::V => fast_class(params, 2 * n + 1).to_string(),
    }
}
