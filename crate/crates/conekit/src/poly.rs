//! Sparse multivariate polynomials over the rationals.
//!
//! Carrier for branch-parameter conditions in the cone refinement and for the
//! truncated Taylor systems. Also implements [`Coeff`] so the jet pipeline can
//! run with symbolic parameters.

use crate::exact::{rat, Rat, RatMatrix};
use num::{BigInt, Signed, Zero};
use std::collections::BTreeMap;

type Expt = Vec<u16>;

/// Polynomial in a fixed number of variables; invariant: no zero coefficients
/// stored, exponent vectors all of length `nvars`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Expt, Rat>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut e = vec![0u16; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, rat(1));
        p
    }

    /// Homogeneous linear form with the given coefficients.
    pub fn linear_form(coeffs: &[Rat]) -> Self {
        let mut p = Self::zero(coeffs.len());
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0u16; coeffs.len()];
                e[i] = 1;
                p.terms.insert(e, c.clone());
            }
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let entry = out.terms.entry(e.clone()).or_insert_with(Rat::zero);
            *entry += c;
            if entry.is_zero() {
                out.terms.remove(e);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Expt = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let entry = out.terms.entry(e.clone()).or_insert_with(Rat::zero);
                *entry += ca * cb;
                if entry.is_zero() {
                    out.terms.remove(&e);
                }
            }
        }
        out
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &p) in e.iter().enumerate() {
                for _ in 0..p {
                    term *= &point[i];
                }
            }
            acc += term;
        }
        acc
    }

    /// Substitutes each variable by a homogeneous linear form in new variables:
    /// `x_i = sum_j map[i][j] sigma_j`.
    pub fn substitute_linear(&self, map: &[Vec<Rat>]) -> Self {
        assert_eq!(map.len(), self.nvars);
        let new_nvars = map.first().map_or(0, Vec::len);
        let forms: Vec<MultiPoly> = map
            .iter()
            .map(|row| {
                assert_eq!(row.len(), new_nvars);
                MultiPoly::linear_form(row)
            })
            .collect();
        let mut out = Self::zero(new_nvars);
        for (e, c) in &self.terms {
            let mut term = Self::constant(new_nvars, c.clone());
            for (i, &p) in e.iter().enumerate() {
                for _ in 0..p {
                    term = term.mul(&forms[i]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Splits into homogeneous components, lowest degree first.
    pub fn homogeneous_components(&self) -> Vec<MultiPoly> {
        let mut by_deg: BTreeMap<usize, MultiPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let d: usize = e.iter().map(|&x| x as usize).sum();
            let p = by_deg.entry(d).or_insert_with(|| Self::zero(self.nvars));
            p.terms.insert(e.clone(), c.clone());
        }
        by_deg.into_values().collect()
    }

    /// Coefficient vector when the polynomial is a homogeneous linear form.
    pub fn as_linear_form(&self) -> Option<Vec<Rat>> {
        let mut coeffs = vec![Rat::zero(); self.nvars];
        for (e, c) in &self.terms {
            let mut support = e.iter().enumerate().filter(|(_, &p)| p > 0);
            match (support.next(), support.next()) {
                (Some((i, &1)), None) => coeffs[i] = c.clone(),
                _ => return None,
            }
        }
        Some(coeffs)
    }

    /// Largest power of variable `i` dividing every term.
    pub fn var_valuation(&self, i: usize) -> u16 {
        self.terms.keys().map(|e| e[i]).min().unwrap_or(0)
    }

    /// Divides by `x_i^p` (caller guarantees divisibility).
    pub fn div_var_power(&self, i: usize, p: u16) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    assert!(e[i] >= p);
                    let mut e = e.clone();
                    e[i] -= p;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Gram matrix of a homogeneous quadratic: `p = x^T G x` with G symmetric.
    pub fn quadratic_gram(&self) -> Option<RatMatrix> {
        let mut g = RatMatrix::zeros(self.nvars, self.nvars);
        for (e, c) in &self.terms {
            let mut support: Vec<(usize, u16)> =
                e.iter().copied().enumerate().filter(|&(_, p)| p > 0).collect();
            support.retain(|&(_, p)| p > 0);
            match support.as_slice() {
                [(i, 2)] => g[(*i, *i)] = c.clone(),
                [(i, 1), (j, 1)] => {
                    let half = c / rat(2);
                    g[(*i, *j)] = half.clone();
                    g[(*j, *i)] = half;
                }
                _ => return None,
            }
        }
        Some(g)
    }

    /// Normalizes the leading coefficient to 1 (for deduplication).
    pub fn monic(&self) -> Self {
        match self.terms.values().next() {
            None => self.clone(),
            Some(c) => self.scale(&(rat(1) / c)),
        }
    }

    /// Pads exponent vectors so the polynomial lives in a larger variable
    /// space. Variables keep their indices.
    pub fn embed(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars);
        if nvars == self.nvars {
            return self.clone();
        }
        Self {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e.resize(nvars, 0);
                    (e, c.clone())
                })
                .collect(),
        }
    }
}

/// The [`Coeff`] impl treats arity as a lower bound: operands are embedded
/// into the larger variable space, so rational constants (arity 0, e.g. from
/// `from_rat`) mix freely with branch-parameter polynomials.
impl crate::exact::Coeff for MultiPoly {
    fn zero() -> Self {
        MultiPoly::zero(0)
    }
    fn one() -> Self {
        MultiPoly::constant(0, rat(1))
    }
    fn is_zero(&self) -> bool {
        MultiPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        let n = self.nvars.max(other.nvars);
        MultiPoly::add(&self.embed(n), &other.embed(n))
    }
    fn sub(&self, other: &Self) -> Self {
        crate::exact::Coeff::add(self, &MultiPoly::neg(other))
    }
    fn mul(&self, other: &Self) -> Self {
        let n = self.nvars.max(other.nvars);
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero(n);
        }
        MultiPoly::mul(&self.embed(n), &other.embed(n))
    }
    fn neg(&self) -> Self {
        MultiPoly::neg(self)
    }
    fn scale(&self, c: &Rat) -> Self {
        MultiPoly::scale(self, c)
    }
    fn from_rat(r: &Rat) -> Self {
        MultiPoly::constant(0, r.clone())
    }
    fn invert(&self) -> Option<Self> {
        if self.degree() == 0 && !self.is_zero() {
            let c = self.terms.values().next().unwrap();
            Some(MultiPoly::constant(self.nvars, rat(1) / c))
        } else {
            None
        }
    }
}

fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let isqrt = |n: &BigInt| -> Option<BigInt> {
        let s = n.sqrt();
        if &(&s * &s) == n {
            Some(s)
        } else {
            None
        }
    };
    Some(Rat::new(isqrt(r.numer())?, isqrt(r.denom())?))
}

/// Splits a homogeneous polynomial into linear forms over the rationals, when
/// possible. Returns the factors up to a nonzero constant (only zero sets
/// matter downstream). Handles monomial variable factors of any degree and
/// quadratic forms of Gram rank at most 2; anything else returns `None`.
pub fn split_linear_factors(p: &MultiPoly) -> Option<Vec<MultiPoly>> {
    assert!(!p.is_zero());
    let mut factors = Vec::new();
    let mut rest = p.clone();
    for i in 0..p.nvars() {
        let v = rest.var_valuation(i);
        if v > 0 {
            rest = rest.div_var_power(i, v);
            for _ in 0..v {
                factors.push(MultiPoly::var(p.nvars(), i));
            }
        }
    }
    match rest.degree() {
        0 => Some(factors),
        1 => {
            factors.push(rest);
            Some(factors)
        }
        2 => {
            let quad = split_quadratic(&rest)?;
            factors.extend(quad);
            Some(factors)
        }
        _ => None,
    }
}

/// Factors a homogeneous quadratic into two linear forms over the rationals.
fn split_quadratic(p: &MultiPoly) -> Option<Vec<MultiPoly>> {
    let g = p.quadratic_gram()?;
    let n = p.nvars();
    let rank = g.rank();
    if rank > 2 {
        return None;
    }
    // Completing the square along a direction e with e^T G e != 0.
    let gram_quad = |e: &[Rat]| -> Rat {
        let ge = g.matvec(e);
        e.iter().zip(&ge).map(|(a, b)| a * b).sum()
    };
    let basis_dir = |i: usize| -> Vec<Rat> {
        (0..n).map(|k| if k == i { rat(1) } else { rat(0) }).collect()
    };
    let mut dir: Option<Vec<Rat>> = (0..n).map(basis_dir).find(|e| !gram_quad(e).is_zero());
    if dir.is_none() {
        'outer: for i in 0..n {
            for j in i + 1..n {
                if !g[(i, j)].is_zero() {
                    let mut e = basis_dir(i);
                    e[j] = rat(1);
                    dir = Some(e);
                    break 'outer;
                }
            }
        }
    }
    let e = dir?;
    let alpha = gram_quad(&e);
    let ge = g.matvec(&e);
    let l1 = MultiPoly::linear_form(&ge);
    if rank == 1 {
        // p = l1^2 / alpha
        return Some(vec![l1.clone(), l1]);
    }
    // Residual rank-1 part: p - l1^2/alpha = m^2 / mu.
    let l1sq = l1.mul(&l1).scale(&(rat(1) / &alpha));
    let resid = p.sub(&l1sq);
    if resid.is_zero() {
        return Some(vec![l1.clone(), l1]);
    }
    let g2 = resid.quadratic_gram()?;
    let i = (0..n).find(|&i| !g2[(i, i)].is_zero())?;
    let m = MultiPoly::linear_form(&g2.column(i).to_vec());
    let mu = g2[(i, i)].clone();
    // p = l1^2/alpha + m^2/(mu * g2[i][i] scaling): concretely
    // resid = m~^2 / mu with m~ = row_i(g2). Factorization over Q exists iff
    // -(alpha/mu) is a rational square.
    let ratio2 = -(alpha.clone() / mu);
    let rho = rat_sqrt(&ratio2)?;
    // p * alpha = l1^2 + (alpha/mu) m^2 = (l1 - rho m)(l1 + rho m)
    let f1 = l1.sub(&m.scale(&rho));
    let f2 = l1.add(&m.scale(&rho));
    Some(vec![f1, f2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn vars3() -> (MultiPoly, MultiPoly, MultiPoly) {
        (MultiPoly::var(3, 0), MultiPoly::var(3, 1), MultiPoly::var(3, 2))
    }

    #[test]
    fn arithmetic_and_eval() {
        let (x, y, _) = vars3();
        // (x + 2y)^2 = x^2 + 4xy + 4y^2
        let p = x.add(&y.scale(&rat(2)));
        let q = p.mul(&p);
        let pt = [rat(3), ratio(1, 2), rat(0)];
        assert_eq!(q.eval(&pt), rat(16));
        assert_eq!(q.degree(), 2);
    }

    #[test]
    fn substitution() {
        let (x, y, _) = vars3();
        let p = x.mul(&y); // xy
        // x = s, y = s + t  ->  s^2 + st  (2 new vars)
        let map = vec![
            vec![rat(1), rat(0)],
            vec![rat(1), rat(1)],
            vec![rat(0), rat(0)],
        ];
        let q = p.substitute_linear(&map);
        assert_eq!(q.eval(&[rat(2), rat(3)]), rat(10));
    }

    #[test]
    fn homogeneous_split() {
        let (x, y, _) = vars3();
        let p = x.add(&x.mul(&y)); // x + xy
        let comps = p.homogeneous_components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0], x);
        assert_eq!(comps[1], x.mul(&y));
    }

    #[test]
    fn factor_monomial_products() {
        let (x, y, _) = vars3();
        let p = x.mul(&y); // xy
        let f = split_linear_factors(&p).unwrap();
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn factor_perfect_square() {
        let (x, _, z) = vars3();
        // (2x - z)^2
        let l = x.scale(&rat(2)).sub(&z);
        let p = l.mul(&l);
        let f = split_linear_factors(&p).unwrap();
        assert_eq!(f.len(), 2);
        for g in &f {
            assert!(g.monic() == l.monic());
        }
    }

    #[test]
    fn factor_hyperbolic() {
        let (x, y, _) = vars3();
        // x^2 - 4y^2 = (x-2y)(x+2y)
        let p = x.mul(&x).sub(&y.mul(&y).scale(&rat(4)));
        let f = split_linear_factors(&p).unwrap();
        let zeros: Vec<_> = f.iter().map(MultiPoly::monic).collect();
        let a = x.sub(&y.scale(&rat(2))).monic();
        let b = x.add(&y.scale(&rat(2))).monic();
        assert!(zeros.contains(&a) && zeros.contains(&b));
    }

    #[test]
    fn irreducible_quadratics_rejected() {
        let (x, y, z) = vars3();
        // x^2 + y^2 (definite), and xy + z^2 (rank 3)
        assert!(split_linear_factors(&x.mul(&x).add(&y.mul(&y))).is_none());
        let p = x.mul(&y).add(&z.mul(&z));
        assert!(split_linear_factors(&p).is_none());
    }

    #[test]
    fn coeff_impl_constants_act_as_scalars() {
        use crate::exact::Coeff;
        let two = <MultiPoly as Coeff>::from_rat(&rat(2));
        let (x, _, _) = vars3();
        let p = Coeff::mul(&two, &x);
        assert_eq!(p, x.scale(&rat(2)));
    }
}
