//! Quantitative control of commutators of near-identity maps.
//!
//! For maps `f, g` defined on `B_r` with `‖f - Id‖_r ≤ ε_f`,
//! `‖g - Id‖_r ≤ ε_g` and a margin `τ`, the commutator is defined on
//! `B_{r - 4 max(ε_f, ε_g) - τ}` with `‖[f,g] - Id‖ ≤ (2/τ) ε_f ε_g` there.
//! Chaining this estimate along the cascade `S_p(j)` with
//! `‖g - Id‖_1 ≤ δ/4` on the generators gives the schedule
//! `‖f - Id‖_{1/2} ≤ δ / 2^{j+2}` for every `f ∈ S_p(j)`.

mod matrix;
mod verify;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

pub use matrix::{matrix_zassenhaus_fit, zassenhaus_ratio, ZassenhausFit};
pub use verify::{verify_cascade_against_schedule, EntryVerdict, GeneratorViolation, VerificationReport};

use crate::error::{Error, Result};

/// Arithmetic needed by [`commutator_estimate`]; implemented for `f64` and
/// exact rationals.
pub trait EstimateScalar: Clone + PartialOrd + fmt::Display {
    fn from_u32(v: u32) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
    fn is_negative(&self) -> bool;
}

impl EstimateScalar for f64 {
    fn from_u32(v: u32) -> Self {
        v as f64
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn is_negative(&self) -> bool {
        *self < 0.0
    }
}

impl EstimateScalar for BigRational {
    fn from_u32(v: u32) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

/// `(r - 4 max(ε_f, ε_g) - τ, (2/τ) ε_f ε_g)`.
pub fn commutator_estimate<T: EstimateScalar>(r: &T, eps_f: &T, eps_g: &T, tau: &T) -> Result<(T, T)> {
    if eps_f.is_negative() || eps_g.is_negative() || !(tau > &T::from_u32(0)) {
        return Err(Error::domain(format!(
            "need eps_f >= 0, eps_g >= 0 and tau > 0 (got {eps_f}, {eps_g}, {tau})"
        )));
    }
    let eps = if eps_f > eps_g { eps_f } else { eps_g };
    let shrink = T::from_u32(4).mul(eps).add(tau);
    if !(shrink < *r) {
        return Err(Error::domain(format!(
            "domain too small: 4·max(eps_f, eps_g) + tau < r fails ({shrink} >= {r})"
        )));
    }
    let target = r.sub(&shrink);
    let bound = T::from_u32(2).div(tau).mul(eps_f).mul(eps_g);
    Ok((target, bound))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `j ≤ p + 1`: radius `1 - 2jδ`.
    Initial,
    /// `j > p + 1`: radius `κ_j`.
    Tail,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScheduleRow {
    pub level: usize,
    pub radius: BigRational,
    pub bound: BigRational,
    pub regime: Regime,
}

impl ScheduleRow {
    pub fn radius_f64(&self) -> f64 {
        self.radius.to_f64().expect("finite")
    }

    pub fn bound_f64(&self) -> f64 {
        self.bound.to_f64().expect("finite")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormSchedule {
    pub p: usize,
    pub delta: BigRational,
    pub rows: Vec<ScheduleRow>,
}

/// Row of a schedule in report form: exact values as `"num/den"` strings
/// next to their nearest doubles.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScheduleRecord {
    pub level: usize,
    pub regime: Regime,
    pub radius: String,
    pub bound: String,
    pub radius_f64: f64,
    pub bound_f64: f64,
}

impl NormSchedule {
    pub fn delta_f64(&self) -> f64 {
        self.delta.to_f64().expect("finite")
    }

    pub fn max_level(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn records(&self) -> Vec<ScheduleRecord> {
        self.rows
            .iter()
            .map(|r| ScheduleRecord {
                level: r.level,
                regime: r.regime,
                radius: r.radius.to_string(),
                bound: r.bound.to_string(),
                radius_f64: r.radius_f64(),
                bound_f64: r.bound_f64(),
            })
            .collect()
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn pow2(k: usize) -> BigRational {
    BigRational::from_integer(BigInt::one() << k)
}

/// Check `(p + 2) δ < 1/4` and `δ > 0`.
pub fn check_parameters(p: usize, delta: &BigRational) -> Result<()> {
    let lhs = BigRational::from_integer(BigInt::from(p + 2)) * delta;
    if !delta.is_positive() || lhs >= rat(1, 4) {
        return Err(Error::validation(
            "(p+2)δ < 1/4",
            format!("p = {p}, δ = {delta} gives (p+2)δ = {lhs}"),
        ));
    }
    Ok(())
}

/// `κ_j = 1 - δ (2(p+1) + 1 + 1/2 + … + 1/2^{j-p-2})` for `j ≥ p + 2`.
pub fn kappa(p: usize, delta: &BigRational, j: usize) -> BigRational {
    assert!(j >= p + 2, "κ_j is defined for j ≥ p + 2");
    let mut sum = BigRational::from_integer(BigInt::from(2 * (p + 1)));
    for i in 0..=(j - p - 2) {
        sum += pow2(i).recip();
    }
    BigRational::one() - delta * sum
}

/// Closed-form schedule: `ρ_j = 1 - 2jδ` for `j ≤ p + 1`, `ρ_j = κ_j`
/// beyond, and `β_j = δ / 2^{j+2}`.
pub fn build_schedule(p: usize, delta: &BigRational, max_level: usize) -> Result<NormSchedule> {
    check_parameters(p, delta)?;
    let rows = (0..=max_level)
        .map(|j| {
            let (radius, regime) = if j <= p + 1 {
                (
                    BigRational::one() - BigRational::from_integer(BigInt::from(2 * j)) * delta,
                    Regime::Initial,
                )
            } else {
                (kappa(p, delta, j), Regime::Tail)
            };
            ScheduleRow {
                level: j,
                radius,
                bound: delta / pow2(j + 2),
                regime,
            }
        })
        .collect();
    Ok(NormSchedule {
        p,
        delta: delta.clone(),
        rows,
    })
}

/// The same schedule obtained by chaining [`commutator_estimate`] with the
/// parameters of the two regimes:
/// `j ≤ p`: `(r, ε, τ) = (1 - 2jδ, δ/4, δ)`;
/// `j = p + 1`: `(1 - 2(p+1)δ, δ/8, δ/2)`;
/// `j ≥ p + 2`: `(κ_j, δ/2^{j-p+2}, δ/2^{j-p})`.
pub fn chain_schedule(p: usize, delta: &BigRational, max_level: usize) -> Result<NormSchedule> {
    check_parameters(p, delta)?;
    let mut rows = vec![ScheduleRow {
        level: 0,
        radius: BigRational::one(),
        bound: delta / pow2(2),
        regime: Regime::Initial,
    }];
    for j in 0..max_level {
        let prev = &rows[j];
        let (eps_g, tau) = if j < p + 1 {
            (delta / pow2(2), delta.clone())
        } else if j == p + 1 {
            (delta / pow2(3), delta / pow2(1))
        } else {
            (delta / pow2(j - p + 2), delta / pow2(j - p))
        };
        let (radius, bound) = commutator_estimate(&prev.radius, &prev.bound, &eps_g, &tau)?;
        rows.push(ScheduleRow {
            level: j + 1,
            radius,
            bound,
            regime: if j < p + 1 { Regime::Initial } else { Regime::Tail },
        });
    }
    Ok(NormSchedule {
        p,
        delta: delta.clone(),
        rows,
    })
}

/// Parse `"1/160"`, `"0.00625"` or `"3"` as an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("'{text}' is not a rational number"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (negative, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let value = BigRational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

#[cfg(test)]
mod tests;
