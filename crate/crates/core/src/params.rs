//! Parameter tables for the family `F(n, d)`.
//!
//! Everything that depends only on the node bound `n` and the depth bound `d`
//! lives here: the rational scale factors `c_k`, the per-level grid steps
//! `x_k`, the `(h, j)` ranges `H_k` and `J_k`, and the prefix sums `Γ_k` that
//! carve the label space `[1, Γ_K)` into one block per level.
//!
//! A label is a single integer `ν`. Inside the block of level `i ≥ 1` it is
//! read as the triplet `(i, h, j)` with `ν = Γ_{i-1} + h·J_i + j`, and it
//! stands for the half-open interval `[x_i·h, x_i·(h + j))`. Labels below
//! `Γ_0` are level-0 triplets `(0, ν, 0)` standing for the point `ν`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("node bound must be at least 1")]
    ZeroNodes,
    #[error("depth bound must be at least 1")]
    ZeroDepth,
    #[error("level {level} out of range 0..={max}")]
    LevelOutOfRange { level: u32, max: u32 },
    #[error("triplet {0} is outside the ranges of its level")]
    InvalidTriplet(Triplet),
    #[error("label {label} outside [1, {limit})")]
    LabelOutOfRange { label: BigUint, limit: BigUint },
}

/// Per-level constants for levels `1..=K`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Level {
    c: Ratio<BigUint>,
    x: BigUint,
    h_count: BigUint,
    j_count: BigUint,
}

/// All `(n, d)`-dependent constants of the scheme. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamTable {
    n_input: u64,
    depth_bound: u64,
    n_pow2: u64,
    levels: u32,
    /// `levels[i - 1]` describes level `i`.
    level: Vec<Level>,
    /// `Γ_0 ..= Γ_K`, strictly increasing.
    gamma: Vec<BigUint>,
    x0: BigUint,
}

impl ParamTable {
    pub fn new(n: u64, d: u64) -> Result<Self, ParamError> {
        if n == 0 {
            return Err(ParamError::ZeroNodes);
        }
        if d == 0 {
            return Err(ParamError::ZeroDepth);
        }
        let n_pow2 = n.next_power_of_two();
        let levels = n_pow2.trailing_zeros();

        let big_n = BigUint::from(n_pow2);
        let big_d = BigUint::from(d);
        let mut c = Ratio::from_integer(BigUint::one());
        let mut gamma = vec![&big_n * 3u32];
        let mut level = Vec::with_capacity(levels as usize);

        for i in 1..=levels {
            let i_sq = BigUint::from(i) * i;
            c += Ratio::new(BigUint::one(), i_sq.clone());
            let two_pow = BigUint::one() << (i - 1);

            // H_i = ⌈1 + 3·n·d·i² / 2^(i-1)⌉
            let h_count = BigUint::one() + ceil_div(&(&big_n * &big_d * &i_sq * 3u32), &two_pow);
            // J_i = ⌈2·d·c_i·i²⌉
            let j_count = ceil_div(&(c.numer() * &big_d * &i_sq * 2u32), c.denom());
            // x_i = ⌈2^(i-1) / (d·i²)⌉
            let x = ceil_div(&two_pow, &(&big_d * &i_sq));

            let next = gamma.last().expect("Γ_0 present") + &h_count * &j_count;
            gamma.push(next);
            level.push(Level {
                c: c.clone(),
                x,
                h_count,
                j_count,
            });
        }

        Ok(Self {
            n_input: n,
            depth_bound: d,
            n_pow2,
            levels,
            level,
            gamma,
            x0: BigUint::one(),
        })
    }

    pub fn n_input(&self) -> u64 {
        self.n_input
    }

    pub fn depth_bound(&self) -> u64 {
        self.depth_bound
    }

    /// `n` rounded up to a power of two.
    pub fn n_pow2(&self) -> u64 {
        self.n_pow2
    }

    /// Top level `K = log2(n_pow2)`.
    pub fn levels(&self) -> u32 {
        self.levels
    }

    fn check_level(&self, k: u32) -> Result<(), ParamError> {
        if k > self.levels {
            Err(ParamError::LevelOutOfRange {
                level: k,
                max: self.levels,
            })
        } else {
            Ok(())
        }
    }

    /// The scale factor `c_k = 1 + Σ_{i ≤ k} 1/i²`.
    pub fn c(&self, k: u32) -> Result<Ratio<BigUint>, ParamError> {
        self.check_level(k)?;
        Ok(match k {
            0 => Ratio::from_integer(BigUint::one()),
            _ => self.level[k as usize - 1].c.clone(),
        })
    }

    /// Grid step of level `k`; `x_0 = 1`.
    pub fn x(&self, k: u32) -> Result<&BigUint, ParamError> {
        self.check_level(k)?;
        Ok(match k {
            0 => &self.x0,
            _ => &self.level[k as usize - 1].x,
        })
    }

    /// Number of admissible `h` values at level `k ≥ 1`. Level 0 uses `[1, Γ_0)`.
    pub fn h_count(&self, k: u32) -> Result<&BigUint, ParamError> {
        self.level_ref(k).map(|l| &l.h_count)
    }

    /// Number of admissible `j` values at level `k ≥ 1`.
    pub fn j_count(&self, k: u32) -> Result<&BigUint, ParamError> {
        self.level_ref(k).map(|l| &l.j_count)
    }

    fn level_ref(&self, k: u32) -> Result<&Level, ParamError> {
        if k == 0 {
            return Err(ParamError::LevelOutOfRange {
                level: 0,
                max: self.levels,
            });
        }
        self.check_level(k)?;
        Ok(&self.level[k as usize - 1])
    }

    pub fn gamma(&self, k: u32) -> Result<&BigUint, ParamError> {
        self.check_level(k)?;
        Ok(&self.gamma[k as usize])
    }

    pub fn gammas(&self) -> &[BigUint] {
        &self.gamma
    }

    /// `Γ_K`, one past the largest label.
    pub fn label_limit(&self) -> &BigUint {
        self.gamma.last().expect("Γ_0 present")
    }

    /// `⌊c_k · m⌋`, exact.
    pub fn floor_c(&self, k: u32, m: &BigUint) -> Result<BigUint, ParamError> {
        self.check_level(k)?;
        if k == 0 {
            return Ok(m.clone());
        }
        let c = &self.level[k as usize - 1].c;
        Ok((c.numer() * m) / c.denom())
    }

    /// Same as [`floor_c`](Self::floor_c) for machine-sized counts.
    pub fn floor_c_u64(&self, k: u32, m: u64) -> Result<BigUint, ParamError> {
        self.floor_c(k, &BigUint::from(m))
    }

    pub fn is_valid_triplet(&self, t: &Triplet) -> bool {
        if t.level > self.levels {
            return false;
        }
        if t.level == 0 {
            return t.j.is_zero() && !t.h.is_zero() && t.h < self.gamma[0];
        }
        let l = &self.level[t.level as usize - 1];
        t.h < l.h_count && t.j < l.j_count
    }

    pub fn encode_triplet(&self, t: &Triplet) -> Result<LabelValue, ParamError> {
        if !self.is_valid_triplet(t) {
            return Err(ParamError::InvalidTriplet(t.clone()));
        }
        if t.level == 0 {
            return Ok(LabelValue(t.h.clone()));
        }
        let i = t.level as usize;
        let l = &self.level[i - 1];
        Ok(LabelValue(&self.gamma[i - 1] + &t.h * &l.j_count + &t.j))
    }

    pub fn decode_triplet(&self, label: &LabelValue) -> Result<Triplet, ParamError> {
        let nu = &label.0;
        if nu.is_zero() || nu >= self.label_limit() {
            return Err(ParamError::LabelOutOfRange {
                label: nu.clone(),
                limit: self.label_limit().clone(),
            });
        }
        // First level whose upper end Γ_i exceeds ν.
        let level = self.gamma.partition_point(|g| g <= nu);
        if level == 0 {
            return Ok(Triplet::point(nu.clone()));
        }
        let offset = nu - &self.gamma[level - 1];
        let (h, j) = offset.div_rem(&self.level[level - 1].j_count);
        Ok(Triplet {
            level: level as u32,
            h,
            j,
        })
    }

    pub fn interval_of(&self, t: &Triplet) -> Result<IntInterval, ParamError> {
        if !self.is_valid_triplet(t) {
            return Err(ParamError::InvalidTriplet(t.clone()));
        }
        Ok(self.interval_unchecked(t))
    }

    pub(crate) fn interval_unchecked(&self, t: &Triplet) -> IntInterval {
        if t.level == 0 {
            return IntInterval {
                lo: t.h.clone(),
                hi: &t.h + 1u32,
            };
        }
        let x = &self.level[t.level as usize - 1].x;
        IntInterval {
            lo: x * &t.h,
            hi: x * (&t.h + &t.j),
        }
    }

    /// Width in bits of a fixed-width ancestry label, `⌈log2 Γ_K⌉`.
    pub fn ancestry_bits(&self) -> u64 {
        (self.label_limit() - 1u32).bits()
    }

    /// Width in bits of a fixed-width adjacency label, `⌈log2((Γ_K - 1)·d)⌉`.
    pub fn adjacency_bits(&self) -> u64 {
        let slots = (self.label_limit() - 1u32) * self.depth_bound;
        (slots - 1u32).bits()
    }
}

fn ceil_div(a: &BigUint, b: &BigUint) -> BigUint {
    Integer::div_ceil(a, b)
}

/// Structured reading `(level, h, j)` of a label.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triplet {
    pub level: u32,
    pub h: BigUint,
    pub j: BigUint,
}

impl Triplet {
    pub fn new(level: u32, h: impl Into<BigUint>, j: impl Into<BigUint>) -> Self {
        Self {
            level,
            h: h.into(),
            j: j.into(),
        }
    }

    pub fn point(p: BigUint) -> Self {
        Self {
            level: 0,
            h: p,
            j: BigUint::zero(),
        }
    }
}

impl fmt::Display for Triplet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.level, self.h, self.j)
    }
}

/// Half-open integer interval `[lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntInterval {
    pub lo: BigUint,
    pub hi: BigUint,
}

impl IntInterval {
    pub fn new(lo: impl Into<BigUint>, hi: impl Into<BigUint>) -> Self {
        let (lo, hi) = (lo.into(), hi.into());
        assert!(lo <= hi, "interval [{lo}, {hi}) has lo > hi");
        Self { lo, hi }
    }

    /// `[lo, lo + len)`.
    pub fn with_len(lo: BigUint, len: &BigUint) -> Self {
        let hi = &lo + len;
        Self { lo, hi }
    }

    pub fn len(&self) -> BigUint {
        &self.hi - &self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.lo == self.hi
    }

    /// Endpoint containment `other ⊆ self`.
    pub fn contains(&self, other: &IntInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn is_disjoint(&self, other: &IntInterval) -> bool {
        self.hi <= other.lo || other.hi <= self.lo || self.is_empty() || other.is_empty()
    }

    /// Prefix of the given length. Panics if it does not fit.
    pub fn prefix(&self, len: &BigUint) -> IntInterval {
        let out = IntInterval::with_len(self.lo.clone(), len);
        assert!(out.hi <= self.hi, "prefix of length {len} overflows {self}");
        out
    }
}

impl fmt::Display for IntInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.lo, self.hi)
    }
}

/// An ancestry label `ν ∈ [1, Γ_K)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelValue(pub BigUint);

impl LabelValue {
    pub fn bits(&self) -> u64 {
        self.0.bits()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl From<u64> for LabelValue {
    fn from(v: u64) -> Self {
        LabelValue(BigUint::from(v))
    }
}

impl From<BigUint> for LabelValue {
    fn from(v: BigUint) -> Self {
        LabelValue(v)
    }
}

impl FromStr for LabelValue {
    type Err = num_bigint::ParseBigIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(LabelValue)
    }
}

impl fmt::Display for LabelValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn lv(v: u64) -> LabelValue {
        LabelValue::from(v)
    }

    #[test]
    fn rejects_zero_bounds() {
        assert_eq!(ParamTable::new(0, 3), Err(ParamError::ZeroNodes));
        assert_eq!(ParamTable::new(3, 0), Err(ParamError::ZeroDepth));
    }

    #[test]
    fn single_node_table_has_no_levels() {
        let p = ParamTable::new(1, 1).unwrap();
        assert_eq!(p.n_pow2(), 1);
        assert_eq!(p.levels(), 0);
        assert_eq!(p.gammas(), &[big(3)]);
        assert_eq!(p.ancestry_bits(), 2);
    }

    #[test]
    fn rounds_up_to_power_of_two() {
        let p = ParamTable::new(3, 2).unwrap();
        assert_eq!(p.n_pow2(), 4);
        assert_eq!(p.levels(), 2);
        assert_eq!(p.gamma(0).unwrap(), &big(12));
        assert_eq!(p.gamma(1).unwrap(), &big(212));
        assert_eq!(p.j_count(2).unwrap(), &big(36));
        assert_eq!(p.x(2).unwrap(), &big(1));
    }

    #[test]
    fn floor_c_examples() {
        let p = ParamTable::new(16, 2).unwrap();
        assert_eq!(p.floor_c_u64(0, 5).unwrap(), big(5));
        assert_eq!(p.floor_c_u64(2, 7).unwrap(), big(15));
        assert_eq!(p.floor_c_u64(1, 0).unwrap(), big(0));
        assert!(matches!(
            p.floor_c_u64(5, 1),
            Err(ParamError::LevelOutOfRange { .. })
        ));
    }

    #[test]
    fn codec_examples() {
        let p16 = ParamTable::new(16, 2).unwrap();
        assert_eq!(
            p16.encode_triplet(&Triplet::new(0, 7u32, 0u32)).unwrap(),
            lv(7)
        );
        assert_eq!(
            p16.encode_triplet(&Triplet::new(1, 2u32, 3u32)).unwrap(),
            lv(67)
        );
        let p2 = ParamTable::new(2, 2).unwrap();
        assert_eq!(
            p2.encode_triplet(&Triplet::new(1, 1u32, 1u32)).unwrap(),
            lv(15)
        );

        assert_eq!(
            p16.decode_triplet(&lv(67)).unwrap(),
            Triplet::new(1, 2u32, 3u32)
        );
        assert_eq!(
            p16.decode_triplet(&lv(47)).unwrap(),
            Triplet::new(0, 47u32, 0u32)
        );
        assert_eq!(
            p16.decode_triplet(&lv(48)).unwrap(),
            Triplet::new(1, 0u32, 0u32)
        );
    }

    #[test]
    fn codec_rejects_out_of_range() {
        let p = ParamTable::new(16, 2).unwrap();
        assert!(p.decode_triplet(&lv(0)).is_err());
        assert!(p.decode_triplet(&lv(56325)).is_err());
        assert!(p.decode_triplet(&lv(56324)).is_ok());
        // h = H_1, j = J_1, level 0 with j ≠ 0, level 0 with h = 0, level above K
        for t in [
            Triplet::new(1, 97u32, 0u32),
            Triplet::new(1, 0u32, 8u32),
            Triplet::new(0, 3u32, 1u32),
            Triplet::new(0, 0u32, 0u32),
            Triplet::new(0, 48u32, 0u32),
            Triplet::new(5, 0u32, 0u32),
        ] {
            assert!(
                matches!(p.encode_triplet(&t), Err(ParamError::InvalidTriplet(_))),
                "{t}"
            );
        }
    }

    #[test]
    fn round_trip_exhaustive_small_table() {
        let p = ParamTable::new(16, 2).unwrap();
        let limit = p.label_limit().to_u64().unwrap();
        for v in 1..limit {
            let t = p.decode_triplet(&lv(v)).unwrap();
            assert_eq!(p.encode_triplet(&t).unwrap(), lv(v));
        }
    }

    #[test]
    fn interval_examples() {
        let p = ParamTable::new(16, 2).unwrap();
        assert_eq!(
            p.interval_of(&Triplet::new(0, 5u32, 0u32)).unwrap(),
            IntInterval::new(5u32, 6u32)
        );
        assert_eq!(
            p.interval_of(&Triplet::new(1, 2u32, 3u32)).unwrap(),
            IntInterval::new(2u32, 5u32)
        );
        let empty = p.interval_of(&Triplet::new(1, 2u32, 0u32)).unwrap();
        assert!(empty.is_empty());
        assert_eq!(empty, IntInterval::new(2u32, 2u32));
    }

    #[test]
    fn bit_widths() {
        assert_eq!(ParamTable::new(16, 2).unwrap().ancestry_bits(), 16);
        assert_eq!(ParamTable::new(1, 1).unwrap().ancestry_bits(), 2);
        assert_eq!(ParamTable::new(1, 1).unwrap().adjacency_bits(), 1);
        let p = ParamTable::new(1 << 20, 8).unwrap();
        assert!(p.ancestry_bits() < 40);
        assert!(p.ancestry_bits() <= 20 + 6 + 16);
    }

    #[test]
    fn handles_huge_bounds_exactly() {
        let n = 1u64 << 40;
        let p = ParamTable::new(n, n).unwrap();
        assert_eq!(p.levels(), 40);
        assert!(p.c(40).unwrap() < Ratio::from_integer(big(3)));
        assert!(p.gammas().windows(2).all(|w| w[0] < w[1]));
        assert!(p.ancestry_bits() > 128);
    }
}
