//! Screw coordinates and rigid-body displacements over two scalar backends.
//!
//! The exact backend ([`Rat`]) carries the whole symbolic pipeline: at the
//! zero reference configuration no trigonometric value is ever needed, so
//! exponentials are only taken at zero angle or for pure translations. The
//! float backend drives the numeric continuation oracle.

use crate::exact::{rat, rat_to_f64, Coeff, Rat};

/// Scalar that additionally supports the circle functions. The exact backend
/// only defines them at zero (callers on the exact path guarantee this).
pub trait Trig: Coeff {
    fn sin_cos(&self) -> (Self, Self);
    /// Whether a squared norm counts as 1 for this backend.
    fn is_unit_norm_sq(nsq: &Self) -> bool;
}

impl Trig for f64 {
    fn sin_cos(&self) -> (Self, Self) {
        f64::sin_cos(*self)
    }
    fn is_unit_norm_sq(nsq: &Self) -> bool {
        (nsq - 1.0).abs() < 1e-9
    }
}

impl Trig for Rat {
    fn sin_cos(&self) -> (Self, Self) {
        assert!(
            Coeff::is_zero(self),
            "exact backend evaluates sin/cos only at zero angle"
        );
        (Rat::zero(), Rat::one())
    }
    fn is_unit_norm_sq(nsq: &Self) -> bool {
        nsq == &Rat::one()
    }
}

impl Coeff for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
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
        self * rat_to_f64(c)
    }
    fn from_rat(r: &Rat) -> Self {
        rat_to_f64(r)
    }
    fn invert(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
}

fn cross<S: Coeff>(a: &[S; 3], b: &[S; 3]) -> [S; 3] {
    [
        a[1].mul(&b[2]).sub(&a[2].mul(&b[1])),
        a[2].mul(&b[0]).sub(&a[0].mul(&b[2])),
        a[0].mul(&b[1]).sub(&a[1].mul(&b[0])),
    ]
}

/// Twist / screw axis in spatial coordinates, (angular; linear) ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct Screw<S: Coeff = Rat> {
    pub angular: [S; 3],
    pub linear: [S; 3],
}

impl<S: Coeff> Screw<S> {
    pub fn new(angular: [S; 3], linear: [S; 3]) -> Self {
        Self { angular, linear }
    }

    pub fn zero() -> Self {
        Self::new(
            [S::zero(), S::zero(), S::zero()],
            [S::zero(), S::zero(), S::zero()],
        )
    }

    pub fn from_components(c: &[S]) -> Self {
        assert_eq!(c.len(), 6, "a screw has six coordinates");
        Self::new(
            [c[0].clone(), c[1].clone(), c[2].clone()],
            [c[3].clone(), c[4].clone(), c[5].clone()],
        )
    }

    pub fn components(&self) -> [S; 6] {
        [
            self.angular[0].clone(),
            self.angular[1].clone(),
            self.angular[2].clone(),
            self.linear[0].clone(),
            self.linear[1].clone(),
            self.linear[2].clone(),
        ]
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(
            [
                self.angular[0].mul(c),
                self.angular[1].mul(c),
                self.angular[2].mul(c),
            ],
            [
                self.linear[0].mul(c),
                self.linear[1].mul(c),
                self.linear[2].mul(c),
            ],
        )
    }

    pub fn neg(&self) -> Self {
        self.scale(&S::one().neg())
    }

    pub fn is_zero(&self) -> bool {
        self.components().iter().all(Coeff::is_zero)
    }

    /// Squared Euclidean norm of the angular part.
    pub fn angular_norm_sq(&self) -> S {
        self.angular
            .iter()
            .fold(S::zero(), |acc, x| acc.add(&x.mul(x)))
    }
}

impl Screw<Rat> {
    pub fn from_ints(c: [i64; 6]) -> Self {
        Self::from_components(&c.map(rat))
    }

    pub fn to_f64(&self) -> Screw<f64> {
        Screw::from_components(&self.components().map(|x| rat_to_f64(&x)))
    }
}

/// se(3) Lie bracket in spatial coordinates:
/// `[S1, S2] = (w1 x w2 ; w1 x v2 + v1 x w2)`.
pub fn bracket<S: Coeff>(a: &Screw<S>, b: &Screw<S>) -> Screw<S> {
    let w = cross(&a.angular, &b.angular);
    let wv = cross(&a.angular, &b.linear);
    let vw = cross(&a.linear, &b.angular);
    Screw::new(w, [wv[0].add(&vw[0]), wv[1].add(&vw[1]), wv[2].add(&vw[2])])
}

/// Rigid-body displacement: rotation matrix plus translation.
#[derive(Debug, Clone, PartialEq)]
pub struct Pose<S: Coeff = Rat> {
    pub rotation: [[S; 3]; 3],
    pub translation: [S; 3],
}

impl<S: Coeff> Pose<S> {
    pub fn identity() -> Self {
        let z = S::zero;
        let o = S::one;
        Self {
            rotation: [[o(), z(), z()], [z(), o(), z()], [z(), z(), o()]],
            translation: [z(), z(), z()],
        }
    }

    pub fn compose(&self, other: &Self) -> Self {
        let mut rotation = [[S::zero(), S::zero(), S::zero()], [S::zero(), S::zero(), S::zero()], [S::zero(), S::zero(), S::zero()]];
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = S::zero();
                for k in 0..3 {
                    acc = acc.add(&self.rotation[i][k].mul(&other.rotation[k][j]));
                }
                rotation[i][j] = acc;
            }
        }
        let mut translation = self.translation.clone();
        for i in 0..3 {
            let mut acc = S::zero();
            for k in 0..3 {
                acc = acc.add(&self.rotation[i][k].mul(&other.translation[k]));
            }
            translation[i] = translation[i].add(&acc);
        }
        Self { rotation, translation }
    }

    pub fn inverse(&self) -> Self {
        // R^T, -R^T p
        let mut rotation = [[S::zero(), S::zero(), S::zero()], [S::zero(), S::zero(), S::zero()], [S::zero(), S::zero(), S::zero()]];
        for i in 0..3 {
            for j in 0..3 {
                rotation[i][j] = self.rotation[j][i].clone();
            }
        }
        let mut translation = [S::zero(), S::zero(), S::zero()];
        for (i, cell) in translation.iter_mut().enumerate() {
            let mut acc = S::zero();
            for k in 0..3 {
                acc = acc.add(&rotation[i][k].mul(&self.translation[k]));
            }
            *cell = acc.neg();
        }
        Self { rotation, translation }
    }

    /// Adjoint action on screw coordinates:
    /// `(w; v) -> (R w ; p x (R w) + R v)`.
    pub fn adjoint_apply(&self, s: &Screw<S>) -> Screw<S> {
        let rw = self.rotate(&s.angular);
        let rv = self.rotate(&s.linear);
        let pxrw = cross(&self.translation, &rw);
        Screw::new(rw, [pxrw[0].add(&rv[0]), pxrw[1].add(&rv[1]), pxrw[2].add(&rv[2])])
    }

    /// The 6x6 adjoint matrix, block form [[R, 0], [p^ R, R]].
    pub fn adjoint_matrix(&self) -> Vec<Vec<S>> {
        let mut m = vec![vec![S::zero(); 6]; 6];
        let e = |i: usize| {
            let mut s = Screw::zero();
            let c: &mut [S; 3] = if i < 3 { &mut s.angular } else { &mut s.linear };
            c[i % 3] = S::one();
            s
        };
        for j in 0..6 {
            let col = self.adjoint_apply(&e(j)).components();
            for i in 0..6 {
                m[i][j] = col[i].clone();
            }
        }
        m
    }

    fn rotate(&self, v: &[S; 3]) -> [S; 3] {
        let mut out = [S::zero(), S::zero(), S::zero()];
        for (i, cell) in out.iter_mut().enumerate() {
            let mut acc = S::zero();
            for k in 0..3 {
                acc = acc.add(&self.rotation[i][k].mul(&v[k]));
            }
            *cell = acc;
        }
        out
    }
}

/// SE(3) exponential of a screw times a joint variable.
///
/// The screw's angular part must have norm 0 (prismatic) or 1 (revolute /
/// helical), which the model loader validates; the exact backend additionally
/// requires a zero angle for rotational screws.
pub fn exp_twist<S: Trig>(y: &Screw<S>, theta: &S) -> Pose<S> {
    let w = &y.angular;
    let v = &y.linear;
    if w.iter().all(Coeff::is_zero) {
        // Pure translation.
        return Pose {
            rotation: Pose::<S>::identity().rotation,
            translation: [v[0].mul(theta), v[1].mul(theta), v[2].mul(theta)],
        };
    }
    let nsq = y.angular_norm_sq();
    assert!(
        S::is_unit_norm_sq(&nsq),
        "rotational screws are expected axis-normalized"
    );
    let (s, c) = theta.sin_cos();
    // R = I + sin(t) W + (1 - cos(t)) W^2,
    // p = (t I + (1 - cos(t)) W + (t - sin(t)) W^2) v, with W = [w]_x.
    let one_minus_c = S::one().sub(&c);
    let t_minus_s = theta.sub(&s);
    let wx = |u: &[S; 3]| cross(w, u);
    let mut rotation = Pose::<S>::identity().rotation;
    let mut translation = [S::zero(), S::zero(), S::zero()];
    for j in 0..3 {
        // column j of R
        let mut ej = [S::zero(), S::zero(), S::zero()];
        ej[j] = S::one();
        let w1 = wx(&ej);
        let w2 = wx(&w1);
        for i in 0..3 {
            rotation[i][j] = ej[i]
                .add(&s.mul(&w1[i]))
                .add(&one_minus_c.mul(&w2[i]));
        }
    }
    let w1 = wx(v);
    let w2 = wx(&w1);
    for i in 0..3 {
        translation[i] = theta
            .mul(&v[i])
            .add(&one_minus_c.mul(&w1[i]))
            .add(&t_minus_s.mul(&w2[i]));
    }
    Pose { rotation, translation }
}

impl Pose<f64> {
    /// se(3) logarithm as a 6-vector (w; v); the inverse of `exp_twist` near
    /// the identity.
    pub fn log(&self) -> [f64; 6] {
        let r = &self.rotation;
        let p = &self.translation;
        let tr = r[0][0] + r[1][1] + r[2][2];
        let cos_t = ((tr - 1.0) / 2.0).clamp(-1.0, 1.0);
        let theta = cos_t.acos();
        if theta < 1e-10 {
            return [0.0, 0.0, 0.0, p[0], p[1], p[2]];
        }
        let f = theta / (2.0 * theta.sin());
        let w = [
            f * (r[2][1] - r[1][2]),
            f * (r[0][2] - r[2][0]),
            f * (r[1][0] - r[0][1]),
        ];
        // V^{-1} = I - W/2 + (1/theta^2)(1 - theta sin / (2(1-cos))) W^2
        let wx = |u: &[f64; 3]| {
            [
                w[1] * u[2] - w[2] * u[1],
                w[2] * u[0] - w[0] * u[2],
                w[0] * u[1] - w[1] * u[0],
            ]
        };
        let coef = (1.0 - theta * theta.sin() / (2.0 * (1.0 - theta.cos()))) / (theta * theta);
        let w1 = wx(p);
        let w2 = wx(&w1);
        let v = [
            p[0] - 0.5 * w1[0] + coef * w2[0],
            p[1] - 0.5 * w1[1] + coef * w2[1],
            p[2] - 0.5 * w1[2] + coef * w2[2],
        ];
        [w[0], w[1], w[2], v[0], v[1], v[2]]
    }

    pub fn log_norm(&self) -> f64 {
        self.log().iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    fn rot_x() -> Screw {
        Screw::from_ints([1, 0, 0, 0, 0, 0])
    }
    fn rot_y() -> Screw {
        Screw::from_ints([0, 1, 0, 0, 0, 0])
    }
    fn rot_z() -> Screw {
        Screw::from_ints([0, 0, 1, 0, 0, 0])
    }

    #[test]
    fn exp_at_zero_is_identity_exact() {
        let g = exp_twist(&rot_x(), &rat(0));
        assert_eq!(g, Pose::identity());
    }

    #[test]
    fn exp_quarter_turn_about_x() {
        let g = exp_twist(&rot_x().to_f64(), &FRAC_PI_2);
        // e_y maps to e_z
        let ey = [0.0, 1.0, 0.0];
        let im = g.rotate(&ey);
        assert!((im[0]).abs() < 1e-12 && (im[1]).abs() < 1e-12 && (im[2] - 1.0).abs() < 1e-12);
        assert!(g.translation.iter().all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn exp_prismatic_is_exact_translation() {
        let y = Screw::from_ints([0, 0, 0, 1, 0, 0]);
        let g = exp_twist(&y, &ratio(7, 3));
        assert_eq!(g.translation, [ratio(7, 3), rat(0), rat(0)]);
        assert_eq!(g.rotation, Pose::<Rat>::identity().rotation);
    }

    #[test]
    fn exp_additivity_float() {
        let y = rot_y().to_f64();
        let g = exp_twist(&y, &0.3).compose(&exp_twist(&y, &0.4));
        let h = exp_twist(&y, &0.7);
        for i in 0..3 {
            for j in 0..3 {
                assert!((g.rotation[i][j] - h.rotation[i][j]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn adjoint_identity_fixes_screws() {
        let y9 = Screw::from_ints([1, 0, 0, 0, 1, 0]);
        assert_eq!(Pose::identity().adjoint_apply(&y9), y9);
    }

    #[test]
    fn adjoint_of_translation_shifts_moment() {
        // Translating the y-axis line by e_x gives moment p x w = +e_z.
        let g = exp_twist(&Screw::from_ints([0, 0, 0, 1, 0, 0]), &rat(1));
        let moved = g.adjoint_apply(&rot_y());
        assert_eq!(moved, Screw::from_ints([0, 1, 0, 0, 0, 1]));
    }

    #[test]
    fn adjoint_composes_and_inverts() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut rand_pose = || {
            let axis = match rng.gen_range(0..3) {
                0 => rot_x(),
                1 => rot_y(),
                _ => rot_z(),
            }
            .to_f64();
            let g = exp_twist(&axis, &rng.gen_range(-2.0..2.0));
            let t = exp_twist(
                &Screw::new([0.0; 3], [rng.gen_range(-1.0..1.0), 0.2, -0.7]),
                &1.0,
            );
            g.compose(&t)
        };
        for _ in 0..5 {
            let g = rand_pose();
            let gi = g.inverse();
            let prod = g.compose(&gi);
            for (i, row) in prod.rotation.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((x - expect).abs() < 1e-12);
                }
            }
            // Ad(g) Ad(g^-1) = I on a couple of screws
            let s = Screw::new([0.3, -1.0, 0.5], [0.1, 0.0, 2.0]);
            let back = g.adjoint_apply(&gi.adjoint_apply(&s));
            for (a, b) in back.components().iter().zip(s.components()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bracket_so3_relation() {
        assert_eq!(bracket(&rot_x(), &rot_y()), rot_z());
    }

    #[test]
    fn bracket_antisymmetry_on_fixture_like_screws() {
        let screws = [
            rot_x(),
            Screw::from_ints([0, 1, 0, -1, 0, 1]),
            Screw::from_ints([0, 0, 0, 0, 1, 0]),
            Screw::from_components(&[rat(0), rat(1), rat(0), ratio(-1, 2), rat(0), rat(0)]),
        ];
        for y in &screws {
            assert!(bracket(y, y).is_zero());
        }
        for a in &screws {
            for b in &screws {
                assert_eq!(bracket(a, b), bracket(b, a).neg());
            }
        }
    }

    #[test]
    fn bracket_mixed_example() {
        let a = rot_x();
        let b = Screw::from_ints([0, 0, 0, 0, 1, 0]);
        assert_eq!(bracket(&a, &b), Screw::from_ints([0, 0, 0, 0, 0, 1]));
    }

    #[test]
    fn jacobi_identity_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut rand_screw = || {
            Screw::from_components(
                &(0..6)
                    .map(|_| ratio(rng.gen_range(-5..=5), rng.gen_range(1..=3)))
                    .collect::<Vec<_>>(),
            )
        };
        for _ in 0..20 {
            let (a, b, c) = (rand_screw(), rand_screw(), rand_screw());
            let mut acc = bracket(&a, &bracket(&b, &c));
            let t2 = bracket(&b, &bracket(&c, &a));
            let t3 = bracket(&c, &bracket(&a, &b));
            for i in 0..6 {
                let s = acc.components()[i].clone() + t2.components()[i].clone()
                    + t3.components()[i].clone();
                assert!(num::Zero::is_zero(&s));
            }
            acc = bracket(&a, &a);
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn axis_invariance_under_own_exponential() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            // unit axis with arbitrary moment, or prismatic
            let prismatic = rng.gen_bool(0.3);
            let y = if prismatic {
                Screw::new([0.0; 3], [rng.gen_range(-1.0..1.0), 0.4, -1.2])
            } else {
                let mut w = [rng.gen_range(-1.0..1.0f64), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
                let n = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
                w = [w[0] / n, w[1] / n, w[2] / n];
                Screw::new(w, [rng.gen_range(-1.0..1.0), -0.3, 0.9])
            };
            let theta = rng.gen_range(-3.0..3.0);
            let moved = exp_twist(&y, &theta).adjoint_apply(&y);
            for (a, b) in moved.components().iter().zip(y.components()) {
                assert!((a - b).abs() < 1e-10, "axis not invariant");
            }
        }
    }

    #[test]
    fn adjoint_derivative_matches_bracket() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..10 {
            let mut w = [rng.gen_range(-1.0..1.0f64), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let n = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
            w = [w[0] / n, w[1] / n, w[2] / n];
            let y = Screw::new(w, [rng.gen_range(-1.0..1.0), 0.1, -0.5]);
            let z = Screw::new(
                [rng.gen_range(-1.0..1.0), 0.7, -0.2],
                [0.3, rng.gen_range(-1.0..1.0), 0.8],
            );
            let h = 1e-6;
            let plus = exp_twist(&y, &h).adjoint_apply(&z);
            let minus = exp_twist(&y, &(-h)).adjoint_apply(&z);
            let br = bracket(&y, &z);
            for i in 0..6 {
                let fd = (plus.components()[i] - minus.components()[i]) / (2.0 * h);
                let sym = br.components()[i];
                let denom = sym.abs().max(1e-3);
                assert!(
                    ((fd - sym) / denom).abs() < 1e-5,
                    "fd {fd} vs bracket {sym}"
                );
            }
        }
    }

    #[test]
    fn log_inverts_exp() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let mut w = [rng.gen_range(-1.0..1.0f64), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let n = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
            w = [w[0] / n, w[1] / n, w[2] / n];
            let y = Screw::new(w, [rng.gen_range(-1.0..1.0), -0.6, 0.2]);
            let theta: f64 = rng.gen_range(-2.0..2.0);
            let lg = exp_twist(&y, &theta).log();
            for (a, b) in lg.iter().zip(y.scale(&theta).components()) {
                assert!((a - b).abs() < 1e-10, "{a} vs {b}");
            }
        }
        assert_eq!(Pose::<f64>::identity().log_norm(), 0.0);
    }
}
