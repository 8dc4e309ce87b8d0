//! su(2) / su(1,1) algebra and group types in the fundamental 2x2 representation.
//!
//! Basis convention on the ordered triple (J1, J2, J3):
//!
//! * `Compact` (su(2)):    J_a = i sigma_a / 2, so [J1,J2] = -J3, [J2,J3] = -J1, [J3,J1] = -J2.
//! * `NonCompact` (su(1,1)): J1 = sigma_1/2, J2 = sigma_2/2, J3 = i sigma_3/2,
//!   so [J1,J2] = +J3 with the other two brackets unchanged.
//!
//! In both cases J3 generates the compact U(1) Cartan subgroup: exp(c J3) is the
//! diagonal phase matrix diag(e^{ic/2}, e^{-ic/2}).  Group elements are kept as
//! explicit 2x2 complex matrices; structure constants and the adjoint norm act on
//! the real coefficient triples.

use num_complex::Complex64;

use crate::error::{CoreError, Result};

/// Tolerance on the residual that decides whether a conjugated matrix still lies
/// in the algebra (relative to the matrix scale).
const PROJECTION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Signature {
    /// su(2): spin problems, unitary evolution.
    Compact,
    /// su(1,1): scattering problems, pseudo-unitary (transfer-matrix) evolution.
    NonCompact,
}

impl Signature {
    fn check_same(self, other: Signature, what: &'static str) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(CoreError::SignatureMismatch(what))
        }
    }
}

/// A 2x2 complex matrix, row-major. Minimal linear algebra for this crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[Complex64::ZERO; 2]; 2]);

    pub fn identity() -> Mat2 {
        Mat2([
            [Complex64::ONE, Complex64::ZERO],
            [Complex64::ZERO, Complex64::ONE],
        ])
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }

    pub fn add(&self, rhs: &Mat2) -> Mat2 {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Mat2) -> Mat2 {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] -= rhs.0[i][j];
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Mat2 {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] *= s;
            }
        }
        out
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Mat2 {
        Mat2([
            [self.0[0][0].conj(), self.0[1][0].conj()],
            [self.0[0][1].conj(), self.0[1][1].conj()],
        ])
    }

    /// Exact inverse of a unimodular matrix: adj(M) for det M = 1.
    pub fn inverse_unimodular(&self) -> Mat2 {
        Mat2([
            [self.0[1][1], -self.0[0][1]],
            [-self.0[1][0], self.0[0][0]],
        ])
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Element of the Lie algebra: real coefficients on (J1, J2, J3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraElement {
    pub c: [f64; 3],
    pub sig: Signature,
}

impl AlgebraElement {
    pub fn new(c: [f64; 3], sig: Signature) -> AlgebraElement {
        AlgebraElement { c, sig }
    }

    pub fn zero(sig: Signature) -> AlgebraElement {
        AlgebraElement { c: [0.0; 3], sig }
    }

    /// c * J_axis for axis in {0,1,2}.
    pub fn basis(axis: usize, coeff: f64, sig: Signature) -> AlgebraElement {
        let mut c = [0.0; 3];
        c[axis] = coeff;
        AlgebraElement { c, sig }
    }

    pub fn scale(&self, s: f64) -> AlgebraElement {
        AlgebraElement {
            c: [self.c[0] * s, self.c[1] * s, self.c[2] * s],
            sig: self.sig,
        }
    }

    pub fn add(&self, rhs: &AlgebraElement) -> Result<AlgebraElement> {
        self.sig.check_same(rhs.sig, "add")?;
        Ok(AlgebraElement {
            c: [
                self.c[0] + rhs.c[0],
                self.c[1] + rhs.c[1],
                self.c[2] + rhs.c[2],
            ],
            sig: self.sig,
        })
    }

    pub fn sub(&self, rhs: &AlgebraElement) -> Result<AlgebraElement> {
        self.sig.check_same(rhs.sig, "sub")?;
        Ok(self.add(&rhs.scale(-1.0)).expect("same signature"))
    }

    /// Euclidean norm of the coefficient triple (not the adjoint norm).
    pub fn coeff_norm(&self) -> f64 {
        self.c.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// The 2x2 representation matrix of this element.
    pub fn matrix(&self) -> Mat2 {
        let [c1, c2, c3] = self.c;
        let i = Complex64::I;
        match self.sig {
            // (i/2)(c . sigma)
            Signature::Compact => Mat2([
                [
                    i * (0.5 * c3),
                    Complex64::new(0.5 * c2, 0.5 * c1),
                ],
                [
                    Complex64::new(-0.5 * c2, 0.5 * c1),
                    i * (-0.5 * c3),
                ],
            ]),
            // c1 sigma1/2 + c2 sigma2/2 + c3 i sigma3/2
            Signature::NonCompact => Mat2([
                [
                    i * (0.5 * c3),
                    Complex64::new(0.5 * c1, -0.5 * c2),
                ],
                [
                    Complex64::new(0.5 * c1, 0.5 * c2),
                    i * (-0.5 * c3),
                ],
            ]),
        }
    }

    /// Inverse of [`matrix`]: orthogonal projection of a 2x2 matrix onto the basis,
    /// together with the residual left outside the algebra.
    pub fn project(m: &Mat2, sig: Signature) -> (AlgebraElement, f64) {
        let x = &m.0;
        let c = match sig {
            Signature::Compact => {
                let c1 = (x[0][1] + x[1][0]).im;
                let c2 = (x[0][1] - x[1][0]).re;
                let c3 = (x[0][0] - x[1][1]).im;
                [c1, c2, c3]
            }
            Signature::NonCompact => {
                let c1 = (x[0][1] + x[1][0]).re;
                let c2 = (x[1][0] - x[0][1]).im;
                let c3 = (x[0][0] - x[1][1]).im;
                [c1, c2, c3]
            }
        };
        let elem = AlgebraElement { c, sig };
        let residual = m.sub(&elem.matrix()).frobenius_norm();
        (elem, residual)
    }

    /// True when the J1 and J2 components vanish exactly.
    pub fn is_cartan(&self) -> bool {
        self.c[0] == 0.0 && self.c[1] == 0.0
    }
}

/// Element of SU(2) or SU(1,1) as a 2x2 matrix with det = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    pub m: Mat2,
    pub sig: Signature,
}

impl GroupElement {
    pub fn identity(sig: Signature) -> GroupElement {
        GroupElement {
            m: Mat2::identity(),
            sig,
        }
    }

    pub fn mul(&self, rhs: &GroupElement) -> Result<GroupElement> {
        self.sig.check_same(rhs.sig, "group product")?;
        Ok(GroupElement {
            m: self.m.mul(&rhs.m),
            sig: self.sig,
        })
    }

    /// Inverse via the unimodular adjugate (exact for det = 1).
    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            m: self.m.inverse_unimodular(),
            sig: self.sig,
        }
    }

    /// |det m - 1|.
    pub fn det_residual(&self) -> f64 {
        (self.m.det() - Complex64::ONE).norm()
    }

    /// Distance from the (pseudo-)unitarity constraint:
    /// compact `|m^H m - 1|`, non-compact `|m^H s3 m - s3|` in Frobenius norm.
    pub fn constraint_residual(&self) -> f64 {
        match self.sig {
            Signature::Compact => self.m.dagger().mul(&self.m).sub(&Mat2::identity()).frobenius_norm(),
            Signature::NonCompact => {
                let s3 = Mat2([
                    [Complex64::ONE, Complex64::ZERO],
                    [Complex64::ZERO, -Complex64::ONE],
                ]);
                self.m
                    .dagger()
                    .mul(&s3)
                    .mul(&self.m)
                    .sub(&s3)
                    .frobenius_norm()
            }
        }
    }
}

/// Cartan decomposition b = v beta v^{-1} with beta on the J3 axis.
#[derive(Debug, Clone, Copy)]
pub struct CartanFrame {
    pub beta: AlgebraElement,
    pub v: GroupElement,
}

impl CartanFrame {
    /// Reconstruct v beta v^{-1}; used by the round-trip invariant.
    pub fn reconstruct(&self) -> Result<AlgebraElement> {
        let m = self
            .v
            .m
            .mul(&self.beta.matrix())
            .mul(&self.v.inverse().m);
        let (elem, residual) = AlgebraElement::project(&m, self.beta.sig);
        if residual > PROJECTION_TOL * (1.0 + m.frobenius_norm()) {
            return Err(CoreError::AlgebraProjection { residual });
        }
        Ok(elem)
    }
}

/// Lie bracket [a, b] through the structure constants of the chosen signature.
pub fn commutator(a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
    a.sig.check_same(b.sig, "commutator")?;
    let [a1, a2, a3] = a.c;
    let [b1, b2, b3] = b.c;
    let cross = [a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1];
    let c = match a.sig {
        Signature::Compact => [-cross[0], -cross[1], -cross[2]],
        Signature::NonCompact => [-cross[0], -cross[1], cross[2]],
    };
    Ok(AlgebraElement { c, sig: a.sig })
}

/// Adjoint representation matrix: column j holds the coefficients of [y, J_j].
pub fn adjoint_matrix(y: &AlgebraElement) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for j in 0..3 {
        let col = commutator(y, &AlgebraElement::basis(j, 1.0, y.sig)).expect("same signature");
        for k in 0..3 {
            out[k][j] = col.c[k];
        }
    }
    out
}

/// Adjoint-trace norm sqrt(Tr(Y Y^H)) with Y the adjoint-representation matrix.
pub fn algebra_norm(y: &AlgebraElement) -> f64 {
    let ad = adjoint_matrix(y);
    ad.iter()
        .flatten()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
}

/// Closed-form exponential map. Uses X^2 = q I with q = -(|c|^2)/4 (compact) or
/// q = (c1^2 + c2^2 - c3^2)/4 (non-compact) so the result is exactly unimodular
/// and (pseudo-)unitary up to rounding.
pub fn exp_map(a: &AlgebraElement) -> GroupElement {
    let [c1, c2, c3] = a.c;
    let q = match a.sig {
        Signature::Compact => -0.25 * (c1 * c1 + c2 * c2 + c3 * c3),
        Signature::NonCompact => 0.25 * (c1 * c1 + c2 * c2 - c3 * c3),
    };
    // exp(X) = cosh(sqrt(q)) I + sinhc(sqrt(q)) X, continued through q <= 0.
    let (c_val, s_val) = if q > 1e-24 {
        let s = q.sqrt();
        (s.cosh(), s.sinh() / s)
    } else if q < -1e-24 {
        let w = (-q).sqrt();
        (w.cos(), w.sin() / w)
    } else {
        (1.0 + q / 2.0 + q * q / 24.0, 1.0 + q / 6.0 + q * q / 120.0)
    };
    let x = a.matrix();
    let m = Mat2::identity()
        .scale(Complex64::new(c_val, 0.0))
        .add(&x.scale(Complex64::new(s_val, 0.0)));
    GroupElement { m, sig: a.sig }
}

/// R(h) eta = h eta h^{-1} - eta.  Vanishes for eta on the Cartan axis whenever
/// h is generated by J3, and for h = identity.
pub fn adjoint_deficit(h: &GroupElement, eta: &AlgebraElement) -> Result<AlgebraElement> {
    h.sig.check_same(eta.sig, "adjoint deficit")?;
    let conj = h.m.mul(&eta.matrix()).mul(&h.inverse().m);
    let (elem, residual) = AlgebraElement::project(&conj, eta.sig);
    if residual > PROJECTION_TOL * (1.0 + conj.frobenius_norm()) {
        return Err(CoreError::AlgebraProjection { residual });
    }
    elem.sub(eta)
}

/// Cartan decomposition of b: beta on the J3 axis with the sign of b's own
/// J3 component (so the frame connects continuously to Cartan asymptotics),
/// v the minimal in-plane rotation (compact) or boost (non-compact).
pub fn cartan_decompose(b: &AlgebraElement) -> Result<CartanFrame> {
    let [c1, c2, c3] = b.c;
    let c_perp = c1.hypot(c2);
    match b.sig {
        Signature::Compact => {
            let r = b.coeff_norm();
            if r == 0.0 {
                return Err(CoreError::ZeroElement);
            }
            let s3 = if c3 < 0.0 { -1.0 } else { 1.0 };
            let beta = AlgebraElement::basis(2, s3 * r, b.sig);
            let v = if c_perp == 0.0 {
                GroupElement::identity(b.sig)
            } else {
                let angle = c_perp.atan2(c3.abs());
                let gen = AlgebraElement::new(
                    [angle * s3 * c2 / c_perp, -angle * s3 * c1 / c_perp, 0.0],
                    b.sig,
                );
                exp_map(&gen)
            };
            Ok(CartanFrame { beta, v })
        }
        Signature::NonCompact => {
            let disc = c3 * c3 - c_perp * c_perp;
            if disc <= 0.0 {
                return Err(if b.coeff_norm() == 0.0 {
                    CoreError::ZeroElement
                } else {
                    CoreError::NonElliptic { invariant: disc }
                });
            }
            let rho = disc.sqrt();
            let s3 = if c3 < 0.0 { -1.0 } else { 1.0 };
            let beta = AlgebraElement::basis(2, s3 * rho, b.sig);
            let v = if c_perp == 0.0 {
                GroupElement::identity(b.sig)
            } else {
                let rapidity = (c_perp / rho).asinh();
                let gen = AlgebraElement::new(
                    [rapidity * s3 * c2 / c_perp, -rapidity * s3 * c1 / c_perp, 0.0],
                    b.sig,
                );
                exp_map(&gen)
            };
            Ok(CartanFrame { beta, v })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SIGS: [Signature; 2] = [Signature::Compact, Signature::NonCompact];

    fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
        assert!((a - b).abs() < tol, "{what}: {a} vs {b}");
    }

    #[test]
    fn commutator_antisymmetry_and_self() {
        for sig in SIGS {
            let a = AlgebraElement::new([0.3, -1.2, 0.7], sig);
            let b = AlgebraElement::new([-0.5, 0.1, 2.0], sig);
            let ab = commutator(&a, &b).unwrap();
            let ba = commutator(&b, &a).unwrap();
            for k in 0..3 {
                assert_close(ab.c[k], -ba.c[k], 1e-15, "antisymmetry");
            }
            let aa = commutator(&a, &a).unwrap();
            assert_eq!(aa.c, [0.0; 3]);
        }
    }

    #[test]
    fn structure_constants_match_matrix_commutators() {
        // oracle: multiply the actual 2x2 matrices
        for sig in SIGS {
            for i in 0..3 {
                for j in 0..3 {
                    let a = AlgebraElement::basis(i, 1.0, sig);
                    let b = AlgebraElement::basis(j, 1.0, sig);
                    let lhs = commutator(&a, &b).unwrap().matrix();
                    let (am, bm) = (a.matrix(), b.matrix());
                    let rhs = am.mul(&bm).sub(&bm.mul(&am));
                    assert!(
                        lhs.sub(&rhs).frobenius_norm() < 1e-15,
                        "{sig:?} [J{},J{}]",
                        i + 1,
                        j + 1
                    );
                }
            }
        }
        // compact realization J_a = i sigma_a / 2 gives [J1, J2] = -J3
        let j1 = AlgebraElement::basis(0, 1.0, Signature::Compact);
        let j2 = AlgebraElement::basis(1, 1.0, Signature::Compact);
        let c = commutator(&j1, &j2).unwrap();
        assert_eq!(c.c, [0.0, 0.0, -1.0]);
        // non-compact flips that single sign
        let j1 = AlgebraElement::basis(0, 1.0, Signature::NonCompact);
        let j2 = AlgebraElement::basis(1, 1.0, Signature::NonCompact);
        let c = commutator(&j1, &j2).unwrap();
        assert_eq!(c.c, [0.0, 0.0, 1.0]);
    }

    #[test]
    fn jacobi_identity() {
        let triples = [
            ([0.1, 0.2, 0.3], [1.0, -0.4, 0.2], [0.0, 0.7, -1.1]),
            ([2.0, 0.0, -1.0], [0.5, 0.5, 0.5], [-0.3, 1.4, 0.9]),
        ];
        for sig in SIGS {
            for (ca, cb, cc) in triples {
                let a = AlgebraElement::new(ca, sig);
                let b = AlgebraElement::new(cb, sig);
                let c = AlgebraElement::new(cc, sig);
                let t1 = commutator(&commutator(&a, &b).unwrap(), &c).unwrap();
                let t2 = commutator(&commutator(&b, &c).unwrap(), &a).unwrap();
                let t3 = commutator(&commutator(&c, &a).unwrap(), &b).unwrap();
                let sum = t1.add(&t2).unwrap().add(&t3).unwrap();
                assert!(sum.coeff_norm() < 1e-12, "jacobi residual {sig:?}");
            }
        }
    }

    #[test]
    fn signature_mismatch_is_an_error() {
        let a = AlgebraElement::basis(0, 1.0, Signature::Compact);
        let b = AlgebraElement::basis(0, 1.0, Signature::NonCompact);
        assert!(commutator(&a, &b).is_err());
    }

    #[test]
    fn norm_of_zero_and_basis_elements() {
        for sig in SIGS {
            assert_eq!(algebra_norm(&AlgebraElement::zero(sig)), 0.0);
            // oracle: the adjoint of J3 has exactly two unit entries in both
            // signatures (it rotates the J1-J2 plane), so the norm is sqrt(2)
            let j3 = AlgebraElement::basis(2, 1.0, sig);
            assert_close(algebra_norm(&j3), 2.0f64.sqrt(), 1e-15, "norm J3");
        }
    }

    #[test]
    fn norm_homogeneity() {
        for sig in SIGS {
            let y = AlgebraElement::new([0.4, -0.9, 1.3], sig);
            for lambda in [-3.5, -0.01, 0.0, 2.25] {
                assert_close(
                    algebra_norm(&y.scale(lambda)),
                    lambda.abs() * algebra_norm(&y),
                    1e-12,
                    "homogeneity",
                );
            }
        }
    }

    #[test]
    fn algebra_matrices_satisfy_defining_relations() {
        // compact: anti-Hermitian traceless; non-compact: X^H s3 = -s3 X, traceless
        let s3 = Mat2([
            [Complex64::ONE, Complex64::ZERO],
            [Complex64::ZERO, -Complex64::ONE],
        ]);
        let y = [0.7, -0.2, 1.9];
        let xc = AlgebraElement::new(y, Signature::Compact).matrix();
        assert!(xc.dagger().add(&xc).frobenius_norm() < 1e-12);
        assert!(xc.trace().norm() < 1e-15);
        let xn = AlgebraElement::new(y, Signature::NonCompact).matrix();
        let lhs = xn.dagger().mul(&s3);
        let rhs = s3.mul(&xn).scale(-Complex64::ONE);
        assert!(lhs.sub(&rhs).frobenius_norm() < 1e-12);
        assert!(xn.trace().norm() < 1e-15);
    }

    #[test]
    fn exp_of_zero_is_identity() {
        for sig in SIGS {
            let g = exp_map(&AlgebraElement::zero(sig));
            assert!(g.m.sub(&Mat2::identity()).frobenius_norm() < 1e-15);
        }
    }

    #[test]
    fn exp_spinor_double_cover() {
        // rotation by pi about axis 2; squaring gives the 2*pi spinor rotation -1
        let g = exp_map(&AlgebraElement::basis(1, std::f64::consts::PI, Signature::Compact));
        let g2 = g.mul(&g).unwrap();
        let minus_one = Mat2::identity().scale(-Complex64::ONE);
        assert!(g2.m.sub(&minus_one).frobenius_norm() < 1e-14);
        // the adjoint action of g flips the 1 and 3 axes
        let flipped = g
            .m
            .mul(&AlgebraElement::basis(0, 1.0, Signature::Compact).matrix())
            .mul(&g.inverse().m);
        let (back, _) = AlgebraElement::project(&flipped, Signature::Compact);
        assert_close(back.c[0], -1.0, 1e-14, "J1 flip");
    }

    #[test]
    fn exp_preserves_group_constraints() {
        let samples = [
            [0.0, 0.0, 0.0],
            [3.0, -2.0, 0.5],
            [0.0, 0.0, 7.0],
            [1e-9, 2e-9, -1e-9],
            [0.1, 0.0, 5.0],
        ];
        for sig in SIGS {
            for c in samples {
                let g = exp_map(&AlgebraElement::new(c, sig));
                assert!(g.det_residual() < 1e-13, "{sig:?} det {c:?}");
                assert!(g.constraint_residual() < 1e-12, "{sig:?} unit {c:?}");
            }
        }
        // a pure non-compact boost: |a|^2 - |b|^2 = 1 exactly up to rounding
        let boost = exp_map(&AlgebraElement::basis(0, 2.5, Signature::NonCompact));
        let a = boost.m.0[0][0].norm_sqr();
        let b = boost.m.0[1][0].norm_sqr();
        assert_close(a - b, 1.0, 1e-12, "su(1,1) constraint");
    }

    #[test]
    fn exp_inverse_identity() {
        for sig in SIGS {
            let a = AlgebraElement::new([1.2, -0.8, 2.2], sig);
            let g = exp_map(&a).mul(&exp_map(&a.scale(-1.0))).unwrap();
            assert!(g.m.sub(&Mat2::identity()).frobenius_norm() < 1e-12);
        }
    }

    #[test]
    fn cartan_generator_exponentiates_to_diagonal_phases() {
        for sig in SIGS {
            let h = exp_map(&AlgebraElement::basis(2, 1.6, sig));
            assert!(h.m.0[0][1].norm() < 1e-15);
            assert!(h.m.0[1][0].norm() < 1e-15);
            assert!((h.m.0[0][0] - Complex64::from_polar(1.0, 0.8)).norm() < 1e-14);
        }
    }

    #[test]
    fn adjoint_deficit_annihilates_cartan_directions() {
        for sig in SIGS {
            let h = exp_map(&AlgebraElement::basis(2, 2.3, sig));
            let r = adjoint_deficit(&h, &AlgebraElement::basis(2, -1.7, sig)).unwrap();
            assert!(r.coeff_norm() < 1e-13, "R(h) J3 = 0");
            let eta = AlgebraElement::new([0.4, -1.0, 0.6], sig);
            let r = adjoint_deficit(&GroupElement::identity(sig), &eta).unwrap();
            assert!(r.coeff_norm() < 1e-15, "R(e) eta = 0");
        }
    }

    #[test]
    fn adjoint_deficit_rotates_the_plane() {
        // h = exp(theta J3), eta = J1  ->  (cos theta - 1) J1 - sin theta J2, either signature
        let theta = 0.77;
        for sig in SIGS {
            let h = exp_map(&AlgebraElement::basis(2, theta, sig));
            let r = adjoint_deficit(&h, &AlgebraElement::basis(0, 1.0, sig)).unwrap();
            assert_close(r.c[0], theta.cos() - 1.0, 1e-14, "cos-type");
            assert_close(r.c[1].abs(), theta.sin().abs(), 1e-14, "sin-type");
            assert_close(r.c[2], 0.0, 1e-14, "no J3 part");
        }
    }

    #[test]
    fn cartan_decompose_trivial_and_errors() {
        for sig in SIGS {
            let b = AlgebraElement::basis(2, -3.5, sig);
            let f = cartan_decompose(&b).unwrap();
            assert_eq!(f.beta.c, [0.0, 0.0, -3.5]);
            assert!(f.v.m.sub(&Mat2::identity()).frobenius_norm() < 1e-15);
        }
        assert!(matches!(
            cartan_decompose(&AlgebraElement::zero(Signature::Compact)),
            Err(CoreError::ZeroElement)
        ));
        // hyperbolic (under-barrier) invariant rejected
        let bad = AlgebraElement::new([2.0, 0.0, 1.0], Signature::NonCompact);
        assert!(matches!(
            cartan_decompose(&bad),
            Err(CoreError::NonElliptic { .. })
        ));
    }

    #[test]
    fn cartan_decompose_spin_field_convention() {
        // field (B1, 0, B0) maps to b = -2 (B1 J1 + B0 J3); the frame must be
        // v = exp(theta J2) with tan theta = -B1/B0 and |beta| = 2 sqrt(B0^2+B1^2)
        let (b0, b1) = (1.5, 0.6);
        let b = AlgebraElement::new([-2.0 * b1, 0.0, -2.0 * b0], Signature::Compact);
        let f = cartan_decompose(&b).unwrap();
        let s = (b0 * b0 + b1 * b1).sqrt();
        assert_close(f.beta.c[2].abs(), 2.0 * s, 1e-14, "beta magnitude");
        // v = exp(theta J2): recover theta from the real rotation matrix entries
        let theta = -(b1 / b0).atan();
        let expect = exp_map(&AlgebraElement::basis(1, theta, Signature::Compact));
        assert!(f.v.m.sub(&expect.m).frobenius_norm() < 1e-13);
        let rt = f.reconstruct().unwrap();
        assert!(rt.sub(&b).unwrap().coeff_norm() < 1e-13);
    }

    #[test]
    fn cartan_decompose_scattering_convention() {
        // b from the two-component reduction at potential U, wavenumber k:
        // v must be the symmetric boost with exp(2 eta) = p/k
        let (k, u): (f64, f64) = (1.0, 0.36);
        let p = (k * k - u).sqrt();
        let b = AlgebraElement::new(
            [0.0, u / k, -(2.0 * k * k - u) / k],
            Signature::NonCompact,
        );
        let f = cartan_decompose(&b).unwrap();
        assert_close(f.beta.c[2], -2.0 * p, 1e-14, "beta = -2p J3");
        let eta = 0.5 * (p / k).ln();
        let (ch, sh) = ((eta).cosh(), (eta).sinh());
        // exp(2 eta J1) = cosh(eta) I + 2 sinh(eta) J1
        assert_close(f.v.m.0[0][0].re, ch, 1e-13, "cosh eta");
        assert_close(f.v.m.0[0][1].re, sh, 1e-13, "sinh eta");
        let rt = f.reconstruct().unwrap();
        assert!(rt.sub(&b).unwrap().coeff_norm() < 1e-13);
    }

    #[test]
    fn cartan_round_trip_generic() {
        let cases_c = [[0.3, 0.4, 0.5], [-2.0, 1.0, 0.1], [0.0, 1.0, 0.0], [5.0, -3.0, -4.0]];
        for c in cases_c {
            let b = AlgebraElement::new(c, Signature::Compact);
            let f = cartan_decompose(&b).unwrap();
            assert!(f.beta.is_cartan());
            let rt = f.reconstruct().unwrap();
            assert!(rt.sub(&b).unwrap().coeff_norm() < 1e-10 * (1.0 + b.coeff_norm()));
        }
        let cases_n = [[0.3, 0.4, 2.0], [-1.0, 0.5, -3.0], [0.0, 0.0, 1.0], [0.9, 0.0, -1.2]];
        for c in cases_n {
            let b = AlgebraElement::new(c, Signature::NonCompact);
            let f = cartan_decompose(&b).unwrap();
            assert!(f.beta.is_cartan());
            let rt = f.reconstruct().unwrap();
            assert!(rt.sub(&b).unwrap().coeff_norm() < 1e-10 * (1.0 + b.coeff_norm()));
        }
    }
}
