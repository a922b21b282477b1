use super::Rat;
use num::Zero;

/// Coefficient ring for truncated power series. Implemented for [`Rat`] and,
/// in the cones machinery, for sparse multivariate polynomials, so the jet
/// pipeline can run with symbolic branch parameters.
pub trait Coeff: Clone + PartialEq + std::fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplication by a rational constant.
    fn scale(&self, c: &Rat) -> Self;
    fn from_rat(r: &Rat) -> Self;
    /// Multiplicative inverse, when one exists in the ring.
    fn invert(&self) -> Option<Self>;
}

impl Coeff for Rat {
    fn zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn one() -> Self {
        num::One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: &Rat) -> Self {
        self * c
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn invert(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Truncated power series in one formal curve parameter `t`, stored as
/// Taylor coefficients: `coeff(m) = f^(m)(0) / m!`. The order is the highest
/// coefficient the jet is valid through; ring operations truncate at the
/// common order of their operands.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet<C: Coeff = Rat> {
    coeffs: Vec<C>,
}

impl<C: Coeff> Jet<C> {
    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![C::zero(); order + 1] }
    }

    pub fn constant(value: C, order: usize) -> Self {
        let mut j = Self::zero(order);
        j.coeffs[0] = value;
        j
    }

    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a jet has at least its value coefficient");
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, m: usize) -> &C {
        &self.coeffs[m]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, m: usize, v: C) {
        self.coeffs[m] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(C::is_zero)
    }

    /// Truncates (or zero-extends) to the given order.
    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, C::zero());
        Self { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let ord = self.order().min(other.order());
        Self {
            coeffs: (0..=ord).map(|m| self.coeffs[m].add(&other.coeffs[m])).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let ord = self.order().min(other.order());
        Self {
            coeffs: (0..=ord).map(|m| self.coeffs[m].sub(&other.coeffs[m])).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(C::neg).collect() }
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Self {
        let ord = self.order().min(other.order());
        let mut coeffs = vec![C::zero(); ord + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(ord + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(ord + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Self { coeffs }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self { coeffs: self.coeffs.iter().map(|x| x.scale(c)).collect() }
    }

    pub fn scale_coeff(&self, c: &C) -> Self {
        Self { coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect() }
    }

    /// d/dt; the result is valid one order lower.
    pub fn derivative(&self) -> Self {
        assert!(self.order() >= 1, "derivative of an order-0 jet is vacuous");
        Self {
            coeffs: (1..=self.order())
                .map(|m| self.coeffs[m].scale(&Rat::from_integer(m.into())))
                .collect(),
        }
    }

    /// Antiderivative with zero constant term; valid one order higher.
    pub fn integrate(&self) -> Self {
        let mut coeffs = vec![C::zero(); self.order() + 2];
        for (m, c) in self.coeffs.iter().enumerate() {
            coeffs[m + 1] = c.scale(&Rat::new(1.into(), (m as i64 + 1).into()));
        }
        Self { coeffs }
    }

    /// Reciprocal of a jet whose value coefficient is a unit.
    pub fn recip(&self) -> Option<Self> {
        let inv0 = self.coeffs[0].invert()?;
        let ord = self.order();
        let mut out = vec![C::zero(); ord + 1];
        out[0] = inv0.clone();
        for m in 1..=ord {
            let mut s = C::zero();
            for k in 1..=m {
                if !self.coeffs[k].is_zero() {
                    s = s.add(&self.coeffs[k].mul(&out[m - k]));
                }
            }
            out[m] = s.mul(&inv0).neg();
        }
        Some(Self { coeffs: out })
    }

    /// Smallest m with a nonzero coefficient, or None for the zero jet.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Divides by `t^s` (shifts coefficients down); validity drops by `s`.
    pub fn shift_down(&self, s: usize) -> Self {
        assert!(self.valuation().map_or(true, |v| v >= s), "shift below valuation");
        assert!(s <= self.order());
        Self { coeffs: self.coeffs[s..].to_vec() }
    }

    /// Multiplies by `t^s`, extending the order by `s`.
    pub fn shift_up(&self, s: usize) -> Self {
        let mut coeffs = vec![C::zero(); s];
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    /// Raw derivative values `f(0), f'(0), …` (Taylor coefficients times m!).
    pub fn derivative_values(&self) -> Vec<C> {
        let mut fact = Rat::from_integer(1.into());
        self.coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| {
                if m > 0 {
                    fact *= Rat::from_integer((m as i64).into());
                }
                c.scale(&fact)
            })
            .collect()
    }
}

impl Jet<Rat> {
    /// Convenience constructor from small integers.
    pub fn from_ints(vals: &[i64]) -> Self {
        Self::from_coeffs(vals.iter().map(|&v| super::rat(v)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};
    use proptest::prelude::*;

    fn jet3(strategy_vals: [i64; 4]) -> Jet {
        Jet::from_ints(&strategy_vals)
    }

    #[test]
    fn mul_truncates_at_common_order() {
        let a = Jet::from_ints(&[1, 1]); // 1 + t, order 1
        let b = Jet::from_ints(&[1, -1, 0]); // 1 - t, order 2
        let p = a.mul(&b);
        assert_eq!(p.order(), 1);
        assert_eq!(p, Jet::from_ints(&[1, 0]));
    }

    #[test]
    fn recip_is_inverse() {
        let a = Jet::from_coeffs(vec![rat(2), ratio(1, 3), rat(-1), rat(4)]);
        let r = a.recip().unwrap();
        let prod = a.mul(&r);
        assert_eq!(prod, Jet::constant(rat(1), 3));
        assert!(Jet::from_ints(&[0, 1]).recip().is_none());
    }

    #[test]
    fn derivative_values_match_convention() {
        // f = 1 + 2t + 3t^2 -> f(0)=1, f'(0)=2, f''(0)=6
        let j = Jet::from_ints(&[1, 2, 3]);
        assert_eq!(j.derivative_values(), vec![rat(1), rat(2), rat(6)]);
    }

    proptest! {
        #[test]
        fn ring_laws(a in proptest::array::uniform4(-20i64..20),
                     b in proptest::array::uniform4(-20i64..20),
                     c in proptest::array::uniform4(-20i64..20)) {
            let (a, b, c) = (jet3(a), jet3(b), jet3(c));
            // associativity
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            // commutativity
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            // distributivity
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }

        #[test]
        fn truncation_consistency(a in proptest::array::uniform4(-20i64..20),
                                  b in proptest::array::uniform4(-20i64..20)) {
            // multiplying then truncating equals truncating then multiplying
            let (a, b) = (jet3(a), jet3(b));
            let full = a.mul(&b).truncate(2);
            let trunc = a.truncate(2).mul(&b.truncate(2));
            prop_assert_eq!(full, trunc);
        }
    }
}
