//! Truncated trivariate power series in `z, u, r` with exact rational
//! coefficients.
//!
//! A series stores integer numerators over one shared positive denominator,
//! kept in lowest terms. Terms are bucketed by `z`-degree; each bucket is
//! sorted by `(j, k)`, the exponents of `u` and `r`. Only `z` is truncated:
//! a series with truncation `N` is exact modulo `z^{N+1}`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("truncation mismatch: {left} vs {right}")]
    TruncationMismatch { left: usize, right: usize },
    #[error("series is not invertible: its z^0 part must be a nonzero constant")]
    NonUnitConstantTerm,
    #[error("series has a nonzero constant term")]
    NonZeroConstantTerm,
    #[error("term z^{i} u^{j} r^{k} is not divisible by the monomial")]
    DivisionRemainder { i: usize, j: u32, k: u32 },
    #[error("degree {i} is beyond the truncation {trunc}")]
    BeyondTruncation { i: usize, trunc: usize },
    #[error("coefficient of z^{i} u^{j} r^{k} is not an integer")]
    IntegralityViolation { i: usize, j: u32, k: u32 },
    #[error("coefficient of z^{i} u^{j} r^{k} is negative")]
    NegativeCoefficient { i: usize, j: u32, k: u32 },
    #[error("series depends on u or r")]
    NotUnivariate,
    #[error("term z^{i} u^{j} r^{k} exceeds the exponent bound j, k <= i")]
    ExponentBound { i: usize, j: u32, k: u32 },
}

pub type Result<T> = std::result::Result<T, SeriesError>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub j: u32,
    pub k: u32,
    pub num: BigInt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Any,
}

impl Parity {
    fn admits(self, e: u32) -> bool {
        match self {
            Parity::Even => e.is_multiple_of(2),
            Parity::Odd => e % 2 == 1,
            Parity::Any => true,
        }
    }
}

/// One coefficient in the dump format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DumpEntry {
    pub i: usize,
    pub j: u32,
    pub k: u32,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriSeries {
    trunc: usize,
    den: BigInt,
    slices: Vec<Vec<Term>>,
}

impl TriSeries {
    pub fn zero(trunc: usize) -> Self {
        TriSeries {
            trunc,
            den: BigInt::one(),
            slices: vec![Vec::new(); trunc + 1],
        }
    }

    pub fn one(trunc: usize) -> Self {
        Self::monomial(trunc, 0, 0, 0, BigRational::one())
    }

    /// `c · z^i u^j r^k`, or zero when `i > trunc`.
    pub fn monomial(trunc: usize, i: usize, j: u32, k: u32, c: BigRational) -> Self {
        Self::from_terms(trunc, [(i, j, k, c)])
    }

    /// Sums the given terms; terms beyond the truncation are dropped.
    pub fn from_terms<I>(trunc: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (usize, u32, u32, BigRational)>,
    {
        let mut map: BTreeMap<(usize, u32, u32), BigRational> = BTreeMap::new();
        for (i, j, k, c) in terms {
            if i <= trunc {
                *map.entry((i, j, k)).or_insert_with(BigRational::zero) += c;
            }
        }
        let den = map.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut slices = vec![Vec::new(); trunc + 1];
        for ((i, j, k), c) in map {
            if c.is_zero() {
                continue;
            }
            let num = c.numer() * (&den / c.denom());
            slices[i].push(Term { j, k, num });
        }
        let mut s = TriSeries { trunc, den, slices };
        s.normalize();
        s
    }

    /// Series in `z` alone from its coefficients; `coeffs[i]` multiplies `z^i`.
    pub fn univariate(trunc: usize, coeffs: &[BigRational]) -> Self {
        Self::from_terms(
            trunc,
            coeffs.iter().enumerate().map(|(i, c)| (i, 0, 0, c.clone())),
        )
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    /// Shared positive denominator of all coefficients.
    pub fn den(&self) -> &BigInt {
        &self.den
    }

    /// Terms of `z`-degree `i`, as numerators over [`TriSeries::den`].
    pub fn slice(&self, i: usize) -> &[Term] {
        self.slices.get(i).map_or(&[], |s| s.as_slice())
    }

    pub fn term_count(&self) -> usize {
        self.slices.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.slices.iter().all(Vec::is_empty)
    }

    /// All stored terms in `(i, j, k)` order with reduced coefficients.
    pub fn terms(&self) -> impl Iterator<Item = (usize, u32, u32, BigRational)> + '_ {
        self.slices.iter().enumerate().flat_map(move |(i, slice)| {
            slice
                .iter()
                .map(move |t| (i, t.j, t.k, BigRational::new(t.num.clone(), self.den.clone())))
        })
    }

    pub fn coefficient(&self, i: usize, j: u32, k: u32) -> Result<BigRational> {
        if i > self.trunc {
            return Err(SeriesError::BeyondTruncation { i, trunc: self.trunc });
        }
        let slice = &self.slices[i];
        Ok(match slice.binary_search_by(|t| (t.j, t.k).cmp(&(j, k))) {
            Ok(pos) => BigRational::new(slice[pos].num.clone(), self.den.clone()),
            Err(_) => BigRational::zero(),
        })
    }

    /// Restricts to `z`-degrees `<= trunc`; a larger value is an error.
    pub fn truncate(&self, trunc: usize) -> Result<Self> {
        if trunc > self.trunc {
            return Err(SeriesError::BeyondTruncation {
                i: trunc,
                trunc: self.trunc,
            });
        }
        let mut s = TriSeries {
            trunc,
            den: self.den.clone(),
            slices: self.slices[..=trunc].to_vec(),
        };
        s.normalize();
        Ok(s)
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for t in self.slices.iter_mut().flatten() {
                t.num = -&t.num;
            }
        }
        if self.is_zero() {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for t in self.slices.iter().flatten() {
            g = g.gcd(&t.num);
            if g.is_one() {
                return;
            }
        }
        self.den /= &g;
        for t in self.slices.iter_mut().flatten() {
            t.num /= &g;
        }
    }

    fn check_trunc(&self, other: &Self) -> Result<()> {
        if self.trunc != other.trunc {
            return Err(SeriesError::TruncationMismatch {
                left: self.trunc,
                right: other.trunc,
            });
        }
        Ok(())
    }

    fn combine(&self, other: &Self, sign: i8) -> Result<Self> {
        self.check_trunc(other)?;
        let den = self.den.lcm(&other.den);
        let fa = &den / &self.den;
        let fb = &den / &other.den;
        let scale = |n: &BigInt, f: &BigInt, neg: bool| {
            let v = if f.is_one() { n.clone() } else { n * f };
            if neg {
                -v
            } else {
                v
            }
        };
        let slices = self
            .slices
            .iter()
            .zip(&other.slices)
            .map(|(xs, ys)| {
                let mut out = Vec::with_capacity(xs.len().max(ys.len()));
                let (mut a, mut b) = (0, 0);
                while a < xs.len() || b < ys.len() {
                    let ka = xs.get(a).map(|t| (t.j, t.k));
                    let kb = ys.get(b).map(|t| (t.j, t.k));
                    let take_a = match (ka, kb) {
                        (Some(x), Some(y)) if x == y => None,
                        (Some(x), Some(y)) => Some(x < y),
                        (Some(_), None) => Some(true),
                        _ => Some(false),
                    };
                    let (j, k, num) = match take_a {
                        None => {
                            let v = scale(&xs[a].num, &fa, false) + scale(&ys[b].num, &fb, sign < 0);
                            a += 1;
                            b += 1;
                            (xs[a - 1].j, xs[a - 1].k, v)
                        }
                        Some(true) => {
                            a += 1;
                            (xs[a - 1].j, xs[a - 1].k, scale(&xs[a - 1].num, &fa, false))
                        }
                        Some(false) => {
                            b += 1;
                            (ys[b - 1].j, ys[b - 1].k, scale(&ys[b - 1].num, &fb, sign < 0))
                        }
                    };
                    if !num.is_zero() {
                        out.push(Term { j, k, num });
                    }
                }
                out
            })
            .collect();
        let mut s = TriSeries {
            trunc: self.trunc,
            den,
            slices,
        };
        s.normalize();
        Ok(s)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero(self.trunc);
        }
        let mut s = self.clone();
        for t in s.slices.iter_mut().flatten() {
            t.num *= q.numer();
        }
        s.den *= q.denom();
        s.normalize();
        s
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_trunc(other)?;
        let (ja, ka) = self.slice_bounds();
        let (jb, kb) = other.slice_bounds();
        let slices: Vec<Vec<Term>> = (0..=self.trunc)
            .into_par_iter()
            .map(|i| {
                let pairs: Vec<(usize, usize)> = (0..=i)
                    .filter(|&a| !self.slices[a].is_empty() && !other.slices[i - a].is_empty())
                    .map(|a| (a, i - a))
                    .collect();
                let jmax = pairs.iter().map(|&(a, b)| ja[a] + jb[b]).max();
                let kmax = pairs.iter().map(|&(a, b)| ka[a] + kb[b]).max();
                let (Some(jmax), Some(kmax)) = (jmax, kmax) else {
                    return Vec::new();
                };
                let mut acc = DenseSlice::new(jmax, kmax);
                for (a, b) in pairs {
                    acc.add_product(&self.slices[a], &other.slices[b], None);
                }
                acc.into_terms()
            })
            .collect();
        let mut s = TriSeries {
            trunc: self.trunc,
            den: &self.den * &other.den,
            slices,
        };
        s.normalize();
        Ok(s)
    }

    /// Largest `j` and `k` in every slice.
    fn slice_bounds(&self) -> (Vec<usize>, Vec<usize>) {
        self.slices
            .iter()
            .map(|s| {
                (
                    s.iter().map(|t| t.j as usize).max().unwrap_or(0),
                    s.iter().map(|t| t.k as usize).max().unwrap_or(0),
                )
            })
            .unzip()
    }

    /// Multiplies by `z^i0 u^j0 r^k0`. The product is exact to degree
    /// `trunc + i0`, which becomes the new truncation.
    pub fn shift(&self, i0: usize, j0: u32, k0: u32) -> Self {
        let mut slices = vec![Vec::new(); i0];
        slices.extend(self.slices.iter().map(|s| {
            s.iter()
                .map(|t| Term {
                    j: t.j + j0,
                    k: t.k + k0,
                    num: t.num.clone(),
                })
                .collect()
        }));
        TriSeries {
            trunc: self.trunc + i0,
            den: self.den.clone(),
            slices,
        }
    }

    /// Divides by `z^i0 u^j0 r^k0`. The quotient is only known to degree
    /// `trunc - i0`, which becomes the new truncation.
    pub fn divide_exact_monomial(&self, i0: usize, j0: u32, k0: u32) -> Result<Self> {
        for (i, slice) in self.slices.iter().enumerate() {
            for t in slice {
                if i < i0 || t.j < j0 || t.k < k0 {
                    return Err(SeriesError::DivisionRemainder { i, j: t.j, k: t.k });
                }
            }
        }
        if i0 > self.trunc {
            return Err(SeriesError::BeyondTruncation {
                i: i0,
                trunc: self.trunc,
            });
        }
        let slices = self.slices[i0..]
            .iter()
            .map(|s| {
                s.iter()
                    .map(|t| Term {
                        j: t.j - j0,
                        k: t.k - k0,
                        num: t.num.clone(),
                    })
                    .collect()
            })
            .collect();
        Ok(TriSeries {
            trunc: self.trunc - i0,
            den: self.den.clone(),
            slices,
        })
    }

    /// `a(z², u², r²)` with truncation `trunc`, which may reach
    /// `2 · self.trunc() + 1` since the substituted series skips odd degrees.
    pub fn square_args_to(&self, trunc: usize) -> Result<Self> {
        if trunc > 2 * self.trunc + 1 {
            return Err(SeriesError::BeyondTruncation {
                i: trunc,
                trunc: 2 * self.trunc + 1,
            });
        }
        let mut s = Self::zero(trunc);
        s.den = self.den.clone();
        for (i, slice) in self.slices.iter().enumerate() {
            if 2 * i > trunc {
                break;
            }
            s.slices[2 * i] = slice
                .iter()
                .map(|t| Term {
                    j: 2 * t.j,
                    k: 2 * t.k,
                    num: t.num.clone(),
                })
                .collect();
        }
        s.normalize();
        Ok(s)
    }

    /// `a(z², u², r²)`.
    pub fn square_args(&self) -> Self {
        self.square_args_to(self.trunc)
            .expect("truncation is within range")
    }

    /// `a(z, ±u, ±r)`.
    pub fn negate_vars(&self, negate_u: bool, negate_r: bool) -> Self {
        let mut s = self.clone();
        for t in s.slices.iter_mut().flatten() {
            let flip = (negate_u && t.j % 2 == 1) ^ (negate_r && t.k % 2 == 1);
            if flip {
                t.num = -&t.num;
            }
        }
        s
    }

    /// Keeps the terms whose `u`- and `r`-exponents have the given parities.
    pub fn parity_filter(&self, u: Parity, r: Parity) -> Self {
        let mut s = TriSeries {
            trunc: self.trunc,
            den: self.den.clone(),
            slices: self
                .slices
                .iter()
                .map(|slice| {
                    slice
                        .iter()
                        .filter(|t| u.admits(t.j) && r.admits(t.k))
                        .cloned()
                        .collect()
                })
                .collect(),
        };
        s.normalize();
        s
    }

    /// `1 / a`. The `z^0` part of `a` must be a nonzero constant.
    pub fn invert(&self) -> Result<Self> {
        let c0 = match self.slices[0].as_slice() {
            [t] if t.j == 0 && t.k == 0 => t.num.clone(),
            _ => return Err(SeriesError::NonUnitConstantTerm),
        };
        let n = self.trunc;
        let (ja, ka) = self.slice_bounds();
        let unit = c0.is_one();
        // gamma_i = -sum_{t>=1} alpha_t gamma_{i-t} c0^{t-1}; the inverse is
        // den / c0^{n+1} * sum_i gamma_i c0^{n-i} z^i.
        let c0_pows: Vec<BigInt> = if unit {
            Vec::new()
        } else {
            std::iter::successors(Some(BigInt::one()), |p| Some(p * &c0))
                .take(n + 1)
                .collect()
        };
        let mut gamma: Vec<Vec<Term>> = Vec::with_capacity(n + 1);
        let mut gj = Vec::with_capacity(n + 1);
        let mut gk = Vec::with_capacity(n + 1);
        gamma.push(vec![Term {
            j: 0,
            k: 0,
            num: BigInt::one(),
        }]);
        gj.push(0);
        gk.push(0);
        for i in 1..=n {
            let pairs: Vec<usize> = (1..=i)
                .filter(|&t| !self.slices[t].is_empty() && !gamma[i - t].is_empty())
                .collect();
            let jmax = pairs.iter().map(|&t| ja[t] + gj[i - t]).max();
            let kmax = pairs.iter().map(|&t| ka[t] + gk[i - t]).max();
            let slice = match (jmax, kmax) {
                (Some(jmax), Some(kmax)) => {
                    let mut acc = DenseSlice::new(jmax, kmax);
                    for t in pairs {
                        let factor = if unit { None } else { Some(&c0_pows[t - 1]) };
                        acc.add_product(&self.slices[t], &gamma[i - t], factor);
                    }
                    let mut terms = acc.into_terms();
                    for term in &mut terms {
                        term.num = -&term.num;
                    }
                    terms
                }
                _ => Vec::new(),
            };
            gj.push(slice.iter().map(|t| t.j as usize).max().unwrap_or(0));
            gk.push(slice.iter().map(|t| t.k as usize).max().unwrap_or(0));
            gamma.push(slice);
        }
        let (den, slices) = if unit {
            let slices = gamma
                .into_iter()
                .map(|mut slice| {
                    for t in &mut slice {
                        t.num *= &self.den;
                    }
                    slice
                })
                .collect();
            (BigInt::one(), slices)
        } else {
            let den = &c0_pows[n] * &c0;
            let slices = gamma
                .into_iter()
                .enumerate()
                .map(|(i, mut slice)| {
                    let f = &c0_pows[n - i] * &self.den;
                    for t in &mut slice {
                        t.num *= &f;
                    }
                    slice
                })
                .collect();
            (den, slices)
        };
        let mut s = TriSeries {
            trunc: n,
            den,
            slices,
        };
        s.normalize();
        Ok(s)
    }

    /// Undirected sequences of at least one element:
    /// `½/(1-c) + ½(1+c)/(1-c(z²,u²,r²)) - 1`.
    pub fn useq_ge1(&self) -> Result<Self> {
        if !self.slices[0].is_empty() {
            return Err(SeriesError::NonZeroConstantTerm);
        }
        let one = Self::one(self.trunc);
        let half = BigRational::new(1.into(), 2.into());
        let seq = one.sub(self)?.invert()?;
        let seq2 = one.sub(&self.square_args())?.invert()?;
        let sym = one.add(self)?.mul(&seq2)?;
        seq.add(&sym)?.scale(&half).sub(&one)
    }

    /// Replaces `u` and `r` by series in `z` alone.
    pub fn substitute(&self, u_image: &TriSeries, r_image: &TriSeries) -> Result<Self> {
        for img in [u_image, r_image] {
            if img.trunc < self.trunc {
                return Err(SeriesError::TruncationMismatch {
                    left: self.trunc,
                    right: img.trunc,
                });
            }
        }
        let (jmax, kmax) = self.slice_bounds();
        let u = PowerTable::from_series(u_image, jmax.into_iter().max().unwrap_or(0), self.trunc)?;
        let r = PowerTable::from_series(r_image, kmax.into_iter().max().unwrap_or(0), self.trunc)?;
        self.substitute_with(&u, &r)
    }

    /// Replaces `u^j r^k` by `U_j · R_k` from precomputed power tables.
    pub fn substitute_with(&self, u: &PowerTable, r: &PowerTable) -> Result<Self> {
        let n = self.trunc;
        for table in [u, r] {
            if table.trunc < n {
                return Err(SeriesError::TruncationMismatch {
                    left: n,
                    right: table.trunc,
                });
            }
        }
        let same = std::ptr::eq(u, r);
        let mut products: HashMap<(u32, u32), Vec<BigInt>> = HashMap::new();
        let mut acc = vec![BigInt::zero(); n + 1];
        let den = if same {
            &self.den * &u.den
        } else {
            &self.den * &u.den * &r.den
        };
        for (i, slice) in self.slices.iter().enumerate() {
            // Merge terms that map to the same power product.
            let mut grouped: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
            for t in slice {
                let key = if same { (t.j + t.k, 0) } else { (t.j, t.k) };
                *grouped.entry(key).or_insert_with(BigInt::zero) += &t.num;
            }
            for (key, c) in grouped {
                if c.is_zero() {
                    continue;
                }
                let image: &[BigInt] = if same {
                    u.power(key.0 as usize)
                } else {
                    products.entry(key).or_insert_with(|| {
                        mul_univariate(u.power(key.0 as usize), r.power(key.1 as usize), n)
                    })
                };
                for (m, p) in image.iter().enumerate().take(n + 1 - i) {
                    if !p.is_zero() {
                        acc[i + m] += &c * p;
                    }
                }
            }
        }
        let slices = acc
            .into_iter()
            .map(|num| {
                if num.is_zero() {
                    Vec::new()
                } else {
                    vec![Term { j: 0, k: 0, num }]
                }
            })
            .collect();
        let mut s = TriSeries {
            trunc: n,
            den,
            slices,
        };
        s.normalize();
        Ok(s)
    }

    /// Coefficients of a series in `z` alone.
    pub fn univariate_coefficients(&self) -> Result<Vec<BigRational>> {
        (0..=self.trunc)
            .map(|i| match self.slices[i].as_slice() {
                [] => Ok(BigRational::zero()),
                [t] if t.j == 0 && t.k == 0 => Ok(BigRational::new(t.num.clone(), self.den.clone())),
                _ => Err(SeriesError::NotUnivariate),
            })
            .collect()
    }

    /// Checks that every coefficient is a nonnegative integer.
    pub fn assert_nonnegative_integers(&self) -> Result<()> {
        for (i, slice) in self.slices.iter().enumerate() {
            for t in slice {
                if !self.den.is_one() {
                    return Err(SeriesError::IntegralityViolation { i, j: t.j, k: t.k });
                }
                if t.num.is_negative() {
                    return Err(SeriesError::NegativeCoefficient { i, j: t.j, k: t.k });
                }
            }
        }
        Ok(())
    }

    /// Integer coefficients of a series in `z` alone, checked to be
    /// nonnegative.
    pub fn nonnegative_integer_coefficients(&self) -> Result<Vec<BigInt>> {
        self.assert_nonnegative_integers()?;
        Ok(self
            .univariate_coefficients()?
            .into_iter()
            .map(|c| c.to_integer())
            .collect())
    }

    /// Checks `j <= i` and `k <= i` for every stored term.
    pub fn check_exponent_bounds(&self) -> Result<()> {
        for (i, slice) in self.slices.iter().enumerate() {
            for t in slice {
                if t.j as usize > i || t.k as usize > i {
                    return Err(SeriesError::ExponentBound { i, j: t.j, k: t.k });
                }
            }
        }
        Ok(())
    }

    /// All terms in `(i, j, k)` order with reduced coefficients.
    pub fn dump(&self) -> Vec<DumpEntry> {
        self.terms()
            .map(|(i, j, k, c)| DumpEntry {
                i,
                j,
                k,
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect()
    }
}

/// Accumulator for one `z`-degree of a product, indexed densely by `(j, k)`.
struct DenseSlice {
    width: usize,
    cells: Vec<BigInt>,
}

impl DenseSlice {
    fn new(jmax: usize, kmax: usize) -> Self {
        DenseSlice {
            width: kmax + 1,
            cells: vec![BigInt::zero(); (jmax + 1) * (kmax + 1)],
        }
    }

    /// Adds `factor · xs · ys`.
    fn add_product(&mut self, xs: &[Term], ys: &[Term], factor: Option<&BigInt>) {
        let (outer, inner) = if xs.len() <= ys.len() { (xs, ys) } else { (ys, xs) };
        let w = self.width;
        for x in outer {
            let base = x.j as usize * w + x.k as usize;
            let scaled;
            let coeff = match factor {
                Some(f) => {
                    scaled = &x.num * f;
                    &scaled
                }
                None => &x.num,
            };
            if coeff.is_one() {
                for y in inner {
                    self.cells[base + y.j as usize * w + y.k as usize] += &y.num;
                }
            } else if coeff.is_negative() && coeff.magnitude().is_one() {
                for y in inner {
                    self.cells[base + y.j as usize * w + y.k as usize] -= &y.num;
                }
            } else {
                for y in inner {
                    self.cells[base + y.j as usize * w + y.k as usize] += coeff * &y.num;
                }
            }
        }
    }

    fn into_terms(self) -> Vec<Term> {
        let w = self.width;
        self.cells
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(idx, num)| Term {
                j: (idx / w) as u32,
                k: (idx % w) as u32,
                num,
            })
            .collect()
    }
}

fn mul_univariate(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n + 1];
    for (x, av) in a.iter().enumerate().take(n + 1) {
        if av.is_zero() {
            continue;
        }
        for (y, bv) in b.iter().enumerate().take(n + 1 - x) {
            if !bv.is_zero() {
                out[x + y] += av * bv;
            }
        }
    }
    out
}

/// Powers `P^0, P^1, …, P^max` of a series in `z`, truncated at `trunc`,
/// as integer numerators over one shared denominator (so `P^s` has
/// coefficients `powers[s][m] / den`).
#[derive(Clone, Debug)]
pub struct PowerTable {
    trunc: usize,
    den: BigInt,
    powers: Vec<Vec<BigInt>>,
}

impl PowerTable {
    fn from_rational(trunc: usize, rows: Vec<Vec<BigRational>>) -> Self {
        let den = rows
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let powers = rows
            .into_iter()
            .map(|row| row.into_iter().map(|c| c.numer() * (&den / c.denom())).collect())
            .collect();
        PowerTable { trunc, den, powers }
    }

    /// Powers of a series in `z` alone, by repeated multiplication.
    pub fn from_series(p: &TriSeries, max_power: usize, trunc: usize) -> Result<Self> {
        let p = p.truncate(trunc)?;
        let coeffs = p.univariate_coefficients()?;
        let mut rows = vec![{
            let mut one = vec![BigRational::zero(); trunc + 1];
            one[0] = BigRational::one();
            one
        }];
        for s in 1..=max_power {
            let prev = &rows[s - 1];
            let mut next = vec![BigRational::zero(); trunc + 1];
            for (x, a) in prev.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (y, b) in coeffs.iter().enumerate().take(trunc + 1 - x) {
                    if !b.is_zero() {
                        next[x + y] += a * b;
                    }
                }
            }
            rows.push(next);
        }
        Ok(Self::from_rational(trunc, rows))
    }

    /// Powers of `(1 - z^w)^alpha`, i.e. `(1 - z^w)^{s·alpha}` for
    /// `s = 0..=max_power`, in closed form.
    pub fn binomial(alpha: &BigRational, w: usize, max_power: usize, trunc: usize) -> Self {
        let rows = (0..=max_power)
            .map(|s| binomial_coefficients(&(alpha * BigInt::from(s)), w, trunc))
            .collect();
        Self::from_rational(trunc, rows)
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn max_power(&self) -> usize {
        self.powers.len() - 1
    }

    fn power(&self, s: usize) -> &[BigInt] {
        &self.powers[s]
    }
}

/// Coefficients of `(1 - z^w)^alpha` up to `z^trunc`.
fn binomial_coefficients(alpha: &BigRational, w: usize, trunc: usize) -> Vec<BigRational> {
    assert!(w >= 1, "the exponent of z must be positive");
    let mut out = vec![BigRational::zero(); trunc + 1];
    let mut c = BigRational::one();
    let mut m = 0usize;
    while m * w <= trunc {
        out[m * w] = c.clone();
        // Coefficient of x^{m+1} in (1 - x)^alpha.
        let mm = BigRational::from_integer(BigInt::from(m));
        c = c * (&mm - alpha) / (mm + BigRational::one());
        m += 1;
    }
    out
}

/// `(1 - z^w)^alpha` as a series in `z`.
pub fn binomial_series(alpha: &BigRational, w: usize, trunc: usize) -> TriSeries {
    TriSeries::univariate(trunc, &binomial_coefficients(alpha, w, trunc))
}
