//! Generating functions for NIM trees.
//!
//! Atoms (marked by vertices `z`, variable HDVs `u` and junctions `r`) are
//! glued into molecules, the undirected sequences of atoms; molecules that
//! are their own reflection satisfy a functional equation solved by
//! fixed-point iteration. Splitting the symmetric molecules by the parities
//! of their `u`- and `r`-degrees and substituting the descendant
//! constructions for `u` and `r` counts symmetric and asymmetric NIM trees.
//! Adding the paths gives `N(z)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::series::{binomial_series, Parity, PowerTable, SeriesError, TriSeries};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OgfError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("fixed-point iteration did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("no sign change of the denominator polynomial in (0, 1)")]
    RootNotBracketed,
    #[error("the two evaluations of N(z) differ at degree {n}")]
    RouteMismatch { n: usize },
    #[error("symmetric molecules with odd u- and r-degree are present")]
    OddOddNonZero,
    #[error("n = {n} is below the minimum of {min}")]
    InvalidRange { n: usize, min: usize },
    #[error("{needed} terms needed but only {available} available")]
    InsufficientTerms { needed: usize, available: usize },
}

/// Extra internal precision so that the divisions by `z` and `zr` leave
/// every requested coefficient exact.
pub const GUARD_DEGREES: usize = 4;

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn check_min(n: usize, min: usize) -> Result<(), OgfError> {
    if n < min {
        return Err(OgfError::InvalidRange { n, min });
    }
    Ok(())
}

/// `A(z,u,r) = z⁴r + z⁵ur + Σ_{k≥2} z^{4k} u^k r`.
pub fn atom_ogf(trunc: usize) -> Result<TriSeries, OgfError> {
    check_min(trunc, 4)?;
    let mut terms = vec![(4, 0, 1, int(1)), (5, 1, 1, int(1))];
    terms.extend((2..=trunc / 4).map(|k| (4 * k, k as u32, 1, int(1))));
    Ok(TriSeries::from_terms(trunc, terms))
}

/// Molecules from atoms: `N* = zr · USeq≥1(A/z)`. Exact to the truncation
/// of `a`.
fn molecules_from_atoms(a: &TriSeries) -> Result<TriSeries, OgfError> {
    let c = a.divide_exact_monomial(1, 0, 0)?;
    Ok(c.useq_ge1()?.shift(1, 0, 1))
}

/// `N*(z,u,r)`, the molecules.
pub fn molecule_ogf(trunc: usize) -> Result<TriSeries, OgfError> {
    molecules_from_atoms(&atom_ogf(trunc)?)
}

/// Result of solving the symmetric-molecule equation.
#[derive(Clone, Debug)]
pub struct SymmetricSolution {
    pub series: TriSeries,
    pub iterations: usize,
}

/// Iteration budget for a truncation: `⌈log₂ n⌉ + 2`.
fn iteration_budget(n: usize) -> usize {
    (usize::BITS - n.max(1).saturating_sub(1).leading_zeros()) as usize + 2
}

/// Solves `S = rA + (2N*(x²) - S(x²)) / (zr) · (1 + A/z)` starting from
/// `S = 0`. The solution is exact to one degree below the truncation of `a`.
fn symmetric_from(a: &TriSeries, n_star: &TriSeries) -> Result<SymmetricSolution, OgfError> {
    let t = a.trunc();
    let out = t - 1;
    let ra = a.shift(0, 0, 1).truncate(out)?;
    let one_plus = TriSeries::one(out).add(&a.divide_exact_monomial(1, 0, 0)?)?;
    let twice_sq = n_star.square_args().scale(&int(2));
    let budget = iteration_budget(t);
    let mut s = TriSeries::zero(out);
    for iteration in 1..=budget {
        let reflected = twice_sq.sub(&s.square_args_to(t)?)?;
        let next = ra.add(&reflected.divide_exact_monomial(1, 0, 1)?.mul(&one_plus)?)?;
        if next == s {
            return Ok(SymmetricSolution {
                series: s,
                iterations: iteration,
            });
        }
        s = next;
    }
    Err(OgfError::NonConvergence { iterations: budget })
}

/// `N*_s(z,u,r)`, the molecules equal to their reflection, exact to degree
/// `trunc - 1`.
pub fn symmetric_molecule_ogf(trunc: usize) -> Result<SymmetricSolution, OgfError> {
    let a = atom_ogf(trunc)?;
    let n_star = molecules_from_atoms(&a)?;
    symmetric_from(&a, &n_star)
}

/// Every stage of the computation of `N(z)`.
#[derive(Clone, Debug)]
pub struct PipelineResult {
    /// Requested truncation: `n_total` is exact to this degree.
    pub trunc: usize,
    pub a: TriSeries,
    pub n_star: TriSeries,
    pub n_star_s: TriSeries,
    pub iterations: usize,
    pub sym_ee: TriSeries,
    pub sym_eo: TriSeries,
    pub sym_oe: TriSeries,
    pub sym_oo: TriSeries,
    pub n_star_a: TriSeries,
    /// Symmetric NIM trees other than paths.
    pub n_s: TriSeries,
    /// Asymmetric NIM trees.
    pub n_a: TriSeries,
    /// `N(n)` for `n = 0..=trunc`, with `N(0) = 0`.
    pub n_total: Vec<BigInt>,
    /// `N_s(n)` for `n = 0..=trunc`.
    pub n_sym: Vec<BigInt>,
}

/// Names accepted by [`PipelineResult::series`].
pub const SERIES_NAMES: [&str; 10] = [
    "atoms",
    "molecules",
    "symmetric_molecules",
    "sym_ee",
    "sym_eo",
    "sym_oe",
    "asymmetric_molecules",
    "n_s",
    "n_a",
    "n_total",
];

impl PipelineResult {
    pub fn count(&self, n: usize) -> Option<&BigInt> {
        self.n_total.get(n)
    }

    /// A named intermediate series.
    pub fn series(&self, name: &str) -> Option<TriSeries> {
        Some(match name {
            "atoms" => self.a.clone(),
            "molecules" => self.n_star.clone(),
            "symmetric_molecules" => self.n_star_s.clone(),
            "sym_ee" => self.sym_ee.clone(),
            "sym_eo" => self.sym_eo.clone(),
            "sym_oe" => self.sym_oe.clone(),
            "asymmetric_molecules" => self.n_star_a.clone(),
            "n_s" => self.n_s.clone(),
            "n_a" => self.n_a.clone(),
            "n_total" => {
                let coeffs: Vec<BigRational> = self
                    .n_total
                    .iter()
                    .cloned()
                    .map(BigRational::from_integer)
                    .collect();
                TriSeries::univariate(self.trunc, &coeffs)
            }
            _ => return None,
        })
    }
}

fn max_total_degree(s: &TriSeries) -> usize {
    (0..=s.trunc())
        .flat_map(|i| s.slice(i).iter().map(|t| (t.j + t.k) as usize))
        .max()
        .unwrap_or(0)
}

/// Runs the whole pipeline; `N(n)` is exact for `n <= trunc`.
///
/// With `f = (1-z²)^{-1/2}`, `g = 1/(1-z)` and `p = √(1-z²)/(1-z)`, and
/// `X(h)` denoting `X(z, h, h)`:
///
/// * `N_s = ee(f) + p·eo(f) + p·oe(f)`
/// * `N_a = N*_a(g) + ½(ee(g) - ee(f)) + ½(eo(g) - p·eo(f)) + ½(oe(g) - p·oe(f))`
/// * `N = z/(1-z) + N_s + N_a`
///
/// The total is also evaluated in the collected form
/// `z/(1-z) + N*_a(g) + ½(ee(f) + ee(g) + p·eo(f) + eo(g) + p·oe(f) + oe(g))`
/// and both must agree.
pub fn assemble_nim_ogf(trunc: usize) -> Result<PipelineResult, OgfError> {
    check_min(trunc, 4)?;
    let t = trunc + GUARD_DEGREES;
    let a = atom_ogf(t)?;
    let n_star = molecules_from_atoms(&a)?;
    n_star.assert_nonnegative_integers()?;
    n_star.check_exponent_bounds()?;
    let SymmetricSolution {
        series: n_star_s,
        iterations,
    } = symmetric_from(&a, &n_star)?;
    n_star_s.assert_nonnegative_integers()?;
    n_star_s.check_exponent_bounds()?;

    let inner = n_star_s.trunc();
    let sym_ee = n_star_s.parity_filter(Parity::Even, Parity::Even);
    let sym_eo = n_star_s.parity_filter(Parity::Even, Parity::Odd);
    let sym_oe = n_star_s.parity_filter(Parity::Odd, Parity::Even);
    let sym_oo = n_star_s.parity_filter(Parity::Odd, Parity::Odd);
    if !sym_oo.is_zero() {
        return Err(OgfError::OddOddNonZero);
    }
    let n_star_a = n_star.truncate(inner)?.sub(&n_star_s)?;
    n_star_a.assert_nonnegative_integers()?;

    let max_power = max_total_degree(&n_star);
    let half = BigRational::new(1.into(), 2.into());
    let f = PowerTable::binomial(&-half.clone(), 2, max_power, inner);
    let g = PowerTable::binomial(&int(-1), 1, max_power, inner);
    let pre = binomial_series(&half, 2, inner).mul(&binomial_series(&int(-1), 1, inner))?;

    let ee_f = sym_ee.substitute_with(&f, &f)?;
    let eo_f = pre.mul(&sym_eo.substitute_with(&f, &f)?)?;
    let oe_f = pre.mul(&sym_oe.substitute_with(&f, &f)?)?;
    let ee_g = sym_ee.substitute_with(&g, &g)?;
    let eo_g = sym_eo.substitute_with(&g, &g)?;
    let oe_g = sym_oe.substitute_with(&g, &g)?;
    let asym_g = n_star_a.substitute_with(&g, &g)?;

    let n_s = ee_f.add(&eo_f)?.add(&oe_f)?;
    let n_a = asym_g
        .add(&ee_g.sub(&ee_f)?.scale(&half))?
        .add(&eo_g.sub(&eo_f)?.scale(&half))?
        .add(&oe_g.sub(&oe_f)?.scale(&half))?;
    let paths = TriSeries::from_terms(inner, (1..=inner).map(|i| (i, 0, 0, int(1))));
    let route_one = paths.add(&n_s)?.add(&n_a)?;
    let collected = ee_f
        .add(&ee_g)?
        .add(&eo_f)?
        .add(&eo_g)?
        .add(&oe_f)?
        .add(&oe_g)?
        .scale(&half);
    let route_two = paths.add(&asym_g)?.add(&collected)?;
    if route_one != route_two {
        let n = (0..=inner)
            .find(|&i| route_one.coefficient(i, 0, 0) != route_two.coefficient(i, 0, 0))
            .unwrap_or(0);
        return Err(OgfError::RouteMismatch { n });
    }
    let route_one = route_one.truncate(trunc)?;
    let n_s = n_s.truncate(trunc)?;
    let n_a = n_a.truncate(trunc)?;
    let n_total = route_one.nonnegative_integer_coefficients()?;
    let n_sym = n_s.nonnegative_integer_coefficients()?;
    n_a.assert_nonnegative_integers()?;

    Ok(PipelineResult {
        trunc,
        a,
        n_star,
        n_star_s,
        iterations,
        sym_ee,
        sym_eo,
        sym_oe,
        sym_oo,
        n_star_a,
        n_s,
        n_a,
        n_total,
        n_sym,
    })
}

/// Ordered NIM trees (each non-symmetric tree counted once per orientation
/// of its spine), for degrees `0..=trunc`:
/// `z/(1-z) · 1/(1 - A(z, 1/(1-z), 1/(1-z))/z) = z(1-z-z⁴) / (1-2z+z²-z³-z⁴+z⁵)`.
pub fn ordered_nim_ogf(trunc: usize) -> Vec<BigInt> {
    expand_rational(&[0, 1, -1, 0, 0, -1], &ORDERED_DENOMINATOR, trunc)
}

/// Expansion of `z(z²+z-1)(z³-2z²+z-1) / (1-3z+3z²-2z³+2z⁵-z⁶)`. This is
/// `z/(1-z) + B/(1-B)` with `B = A(z, 1/(1-z), 1/(1-z))/z`, which lacks the
/// end junction and the shared vertex of the ordered construction and so
/// falls short of [`ordered_nim_ogf`] from degree 3 on; its denominator is
/// `(1-z)` times the ordered one, so both have the same dominant pole.
pub fn ordered_nim_ogf_printed(trunc: usize) -> Vec<BigInt> {
    let numerator = poly_mul(&poly_mul(&[0, 1], &[-1, 1, 1]), &[-1, 1, -2, 1]);
    expand_rational(&numerator, &DENOMINATOR, trunc)
}

/// `1 - 2z + z² - z³ - z⁴ + z⁵`.
const ORDERED_DENOMINATOR: [i64; 6] = [1, -2, 1, -1, -1, 1];

/// `1 - 3z + 3z² - 2z³ + 2z⁵ - z⁶`.
const DENOMINATOR: [i64; 7] = [1, -3, 3, -2, 0, 2, -1];

/// Power series of `num / den` for `den[0] = 1`.
fn expand_rational(num: &[i64], den: &[i64], trunc: usize) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = Vec::with_capacity(trunc + 1);
    for n in 0..=trunc {
        let mut c = BigInt::from(*num.get(n).unwrap_or(&0));
        for (d, &q) in den.iter().enumerate().skip(1) {
            if d <= n && q != 0 {
                c -= &out[n - d] * q;
            }
        }
        out.push(c);
    }
    out
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn denominator_at(z: f64) -> f64 {
    DENOMINATOR.iter().rev().fold(0.0, |acc, &c| acc * z + c as f64)
}

/// The smallest root `ρ` of `1 - 3z + 3z² - 2z³ + 2z⁵ - z⁶` in `(0, 1)` and
/// the growth constant `c = 1/ρ`.
pub fn growth_constant() -> Result<(f64, f64), OgfError> {
    const STEPS: usize = 64;
    let mut lo = 0.0;
    let mut bracket = None;
    for step in 1..STEPS {
        let hi = step as f64 / STEPS as f64;
        if denominator_at(lo).signum() != denominator_at(hi).signum() {
            bracket = Some((lo, hi));
            break;
        }
        lo = hi;
    }
    let (mut lo, mut hi) = bracket.ok_or(OgfError::RootNotBracketed)?;
    let lo_sign = denominator_at(lo).signum();
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if denominator_at(mid).signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let rho = 0.5 * (lo + hi);
    Ok((rho, 1.0 / rho))
}

/// Residual of the denominator polynomial at `z`.
pub fn growth_polynomial(z: f64) -> f64 {
    denominator_at(z)
}

/// Coefficients of the depth-15 recurrence, for `N(n-1), …, N(n-15)`.
pub const RECURRENCE: [i64; 15] = [2, 1, -3, 2, -1, -2, 1, 3, -4, -1, 2, -2, 2, 1, -1];

/// First degree at which the recurrence is claimed.
pub const RECURRENCE_START: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecurrenceReport {
    pub from: usize,
    pub to: usize,
    pub checked: usize,
    pub holds: bool,
    pub first_failure: Option<usize>,
}

/// Checks the recurrence on `values[n] = N(n)` for `16 <= n <= max_n`.
pub fn check_recurrence(values: &[BigInt], max_n: usize) -> Result<RecurrenceReport, OgfError> {
    if values.len() <= max_n {
        return Err(OgfError::InsufficientTerms {
            needed: max_n + 1,
            available: values.len(),
        });
    }
    let mut checked = 0;
    let mut first_failure = None;
    for n in RECURRENCE_START..=max_n {
        let predicted: BigInt = RECURRENCE
            .iter()
            .enumerate()
            .map(|(d, &c)| &values[n - 1 - d] * c)
            .sum();
        checked += 1;
        if predicted != values[n] {
            first_failure = Some(n);
            break;
        }
    }
    Ok(RecurrenceReport {
        from: RECURRENCE_START,
        to: max_n,
        checked,
        holds: first_failure.is_none(),
        first_failure,
    })
}

/// `2^{n-4} + 2^{⌊(n-4)/2⌋}`.
pub fn caterpillar_count(n: usize) -> Result<BigInt, OgfError> {
    check_min(n, 4)?;
    Ok((BigInt::one() << (n - 4)) + (BigInt::one() << ((n - 4) / 2)))
}

/// Checks that every entry is a nonnegative integer value.
pub fn all_nonnegative(values: &[BigInt]) -> bool {
    values.iter().all(|v| !v.is_negative())
}

/// `2N(n) - N_s(n) - 1` for `n >= 1`: each NIM tree counted once per
/// orientation of its spine.
pub fn ordered_from_counts(result: &PipelineResult) -> Vec<BigInt> {
    result
        .n_total
        .iter()
        .zip(&result.n_sym)
        .enumerate()
        .map(|(n, (total, sym))| {
            if n == 0 {
                BigInt::zero()
            } else {
                total * 2 - sym - 1
            }
        })
        .collect()
}
