//! Symmetric bilinear forms of Lorentzian signature and the two hyperbolic
//! distance formulas.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{inertia, rat, to_f64, ExactVector, Rational, RationalMatrix};

/// Which sign occurs exactly once in a Lorentzian form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SignatureConvention {
    /// Signature `(k, 1)`: sphere spaces, Coxeter Gram matrices.
    #[default]
    OneNegative,
    /// Signature `(1, k)`: Néron–Severi style lattices.
    OnePositive,
}

/// An exact, nondegenerate symmetric bilinear form on `Q^dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSpace {
    gram: RationalMatrix,
    positive: usize,
    negative: usize,
}

impl QuadraticSpace {
    pub fn new(gram: RationalMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::NotSquare { rows: gram.rows(), cols: gram.cols() });
        }
        let inertia = inertia(&gram)?;
        if inertia.zero > 0 {
            return Err(Error::Singular);
        }
        Ok(QuadraticSpace { gram, positive: inertia.positive, negative: inertia.negative })
    }

    /// A form with exactly one eigenvalue of the distinguished sign.
    pub fn lorentzian(gram: RationalMatrix, convention: SignatureConvention) -> Result<Self> {
        let space = Self::new(gram)?;
        let dim = space.dim();
        let ok = match convention {
            SignatureConvention::OneNegative => space.negative == 1,
            SignatureConvention::OnePositive => space.positive == 1,
        };
        if !ok {
            let (want_pos, want_neg) = match convention {
                SignatureConvention::OneNegative => (dim - 1, 1),
                SignatureConvention::OnePositive => (1, dim - 1),
            };
            return Err(Error::WrongSignature {
                want_pos,
                want_neg,
                found_pos: space.positive,
                found_neg: space.negative,
            });
        }
        Ok(space)
    }

    /// `2 t_0 t_{n+1} + t_1^2 + ... + t_n^2` on `Q^{n+2}`.
    pub fn fundamental(n: usize) -> Self {
        let dim = n + 2;
        let mut gram = RationalMatrix::zeros(dim, dim);
        gram[(0, dim - 1)] = Rational::one();
        gram[(dim - 1, 0)] = Rational::one();
        for i in 1..=n {
            gram[(i, i)] = Rational::one();
        }
        QuadraticSpace { gram, positive: n + 1, negative: 1 }
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &RationalMatrix {
        &self.gram
    }

    pub fn signature(&self) -> (usize, usize) {
        (self.positive, self.negative)
    }

    fn check_len(&self, v: &ExactVector) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.len() });
        }
        Ok(())
    }

    pub fn inner(&self, v: &ExactVector, w: &ExactVector) -> Result<Rational> {
        self.check_len(v)?;
        self.check_len(w)?;
        let mut total = Rational::zero();
        for i in 0..self.dim() {
            if v[i].is_zero() {
                continue;
            }
            let mut row = Rational::zero();
            for j in 0..self.dim() {
                let g = &self.gram[(i, j)];
                if !g.is_zero() && !w[j].is_zero() {
                    row += g * &w[j];
                }
            }
            total += &v[i] * row;
        }
        Ok(total)
    }

    pub fn norm(&self, v: &ExactVector) -> Result<Rational> {
        self.inner(v, v)
    }

    /// `gram · v`; pairing it with `w` coordinatewise gives `(v, w)`.
    pub fn covector(&self, v: &ExactVector) -> Result<ExactVector> {
        self.gram.mul_vec(v)
    }

    /// Gram matrix of a list of vectors.
    pub fn gram_of(&self, vectors: &[ExactVector]) -> Result<RationalMatrix> {
        let n = vectors.len();
        let mut m = RationalMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let x = self.inner(&vectors[i], &vectors[j])?;
                m[(j, i)] = x.clone();
                m[(i, j)] = x;
            }
        }
        Ok(m)
    }

    /// Matrix (acting on coordinate columns) of `v ↦ v − 2 (v,α)/(α,α) α`.
    pub fn reflection(&self, alpha: &ExactVector) -> Result<RationalMatrix> {
        let norm = self.norm(alpha)?;
        if norm.is_zero() {
            return Err(Error::InvalidArgument("cannot reflect in an isotropic vector".into()));
        }
        let cov = self.covector(alpha)?;
        let dim = self.dim();
        let mut m = RationalMatrix::identity(dim);
        let two_over = rat(2) / norm;
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] -= &two_over * &alpha[i] * &cov[j];
            }
        }
        Ok(m)
    }

    /// Whether `a` maps this form to itself: `Aᵀ G A = G`.
    pub fn preserved_by(&self, a: &RationalMatrix) -> Result<bool> {
        Ok(&self.gram.congruence(a)? == self.gram())
    }
}

pub fn inner(v: &ExactVector, w: &ExactVector, space: &QuadraticSpace) -> Result<Rational> {
    space.inner(v, w)
}

/// Exact inertia `(pos, neg)` of a nondegenerate symmetric matrix.
pub fn signature(gram: &RationalMatrix) -> Result<(usize, usize)> {
    QuadraticSpace::new(gram.clone()).map(|q| q.signature())
}

/// Distance between two points of the hyperboloid `(v,v) = -1`.
pub fn hyperbolic_distance(v: &ExactVector, w: &ExactVector, space: &QuadraticSpace) -> Result<f64> {
    let minus_one = rat(-1);
    for x in [v, w] {
        let n = space.norm(x)?;
        if n != minus_one {
            return Err(Error::WrongNorm { expected: Box::new(minus_one), found: Box::new(n) });
        }
    }
    let c = -space.inner(v, w)?;
    if c < Rational::one() {
        return Err(Error::NotSameSheet(c));
    }
    Ok(to_f64(&c).acosh())
}

/// Distance between two divergent or tangent hyperplanes with unit normals.
pub fn hyperplane_distance(e: &ExactVector, e2: &ExactVector, space: &QuadraticSpace) -> Result<f64> {
    let one = Rational::one();
    for x in [e, e2] {
        let n = space.norm(x)?;
        if n != one {
            return Err(Error::WrongNorm { expected: Box::new(one), found: Box::new(n) });
        }
    }
    let c = space.inner(e, e2)?.abs();
    if c < one {
        return Err(Error::IntersectingHyperplanes(c));
    }
    Ok(to_f64(&c).acosh())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use proptest::prelude::*;

    fn cir(row: &[i64]) -> RationalMatrix {
        RationalMatrix::circulant(&row.iter().map(|&x| rat(x)).collect::<Vec<_>>())
    }

    #[test]
    fn fundamental_form_values() {
        let q = QuadraticSpace::fundamental(2);
        let v = ExactVector::from_i64(&[1, 0, 0, 0]);
        let w = ExactVector::from_i64(&[0, 0, 0, 1]);
        assert_eq!(q.inner(&v, &w).unwrap(), rat(1));
        let u = ExactVector::new(vec![rat(1), rat(0), rat(0), ratio(1, 2)]);
        assert_eq!(q.norm(&u).unwrap(), rat(1));
        assert_eq!(q.signature(), (3, 1));
    }

    #[test]
    fn apollonian_basis_vectors() {
        let q = QuadraticSpace::new(cir(&[1, -1, -1, -1])).unwrap();
        let e1 = ExactVector::unit(4, 0);
        let e2 = ExactVector::unit(4, 1);
        assert_eq!(q.inner(&e1, &e2).unwrap(), rat(-1));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let q = QuadraticSpace::fundamental(2);
        let short = ExactVector::from_i64(&[1, 0]);
        assert!(matches!(q.inner(&short, &short), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn signatures() {
        let diag = RationalMatrix::diagonal(&[rat(1), rat(1), rat(-1)]);
        assert_eq!(signature(&diag).unwrap(), (2, 1));
        assert_eq!(signature(&cir(&[1, -1, -1, -1])).unwrap(), (3, 1));
        let form = RationalMatrix::from_i64(&[&[0, 1, 2], &[1, -2, 3], &[2, 3, -2]]);
        assert_eq!(signature(&form).unwrap(), (1, 2));
        assert!(matches!(signature(&RationalMatrix::zeros(2, 2)), Err(Error::Singular)));
    }

    #[test]
    fn lorentzian_constructor_rejects_definite_forms() {
        let id = RationalMatrix::identity(3);
        assert!(matches!(
            QuadraticSpace::lorentzian(id, SignatureConvention::OneNegative),
            Err(Error::WrongSignature { .. })
        ));
        let form = RationalMatrix::from_i64(&[&[0, 1, 2], &[1, -2, 3], &[2, 3, -2]]);
        assert!(QuadraticSpace::lorentzian(form, SignatureConvention::OnePositive).is_ok());
    }

    #[test]
    fn hyperbolic_distances() {
        let q = QuadraticSpace::new(RationalMatrix::diagonal(&[rat(-1), rat(1)])).unwrap();
        let v = ExactVector::from_i64(&[1, 0]);
        assert_eq!(hyperbolic_distance(&v, &v, &q).unwrap(), 0.0);
        // (5/4, 3/4) lies on the hyperboloid; cosh d = 5/4 gives d = ln 2
        let w = ExactVector::new(vec![ratio(5, 4), ratio(3, 4)]);
        let d = hyperbolic_distance(&v, &w, &q).unwrap();
        assert!((d - 2f64.ln()).abs() < 1e-15);
        // a rational point close to (cosh 1, sinh 1)
        let t = ratio(462_117, 1_000_000); // ~ tanh(1/2)
        let one = rat(1);
        let den = &one - &t * &t;
        let w1 = ExactVector::new(vec![(&one + &t * &t) / &den, (rat(2) * &t) / &den]);
        assert!((hyperbolic_distance(&v, &w1, &q).unwrap() - 1.0).abs() < 1e-5);
        let off = ExactVector::from_i64(&[2, 0]);
        assert!(matches!(hyperbolic_distance(&v, &off, &q), Err(Error::WrongNorm { .. })));
        let other_sheet = ExactVector::from_i64(&[-1, 0]);
        assert!(matches!(hyperbolic_distance(&v, &other_sheet, &q), Err(Error::NotSameSheet(_))));
    }

    #[test]
    fn hyperplane_distances() {
        let q = QuadraticSpace::fundamental(2);
        // tangent unit circles at (0,0) and (2,0)
        let a = ExactVector::new(vec![rat(1), rat(0), rat(0), ratio(1, 2)]);
        let b = ExactVector::new(vec![rat(1), rat(2), rat(0), ratio(-3, 2)]);
        assert_eq!(q.inner(&a, &b).unwrap(), rat(-1));
        assert_eq!(hyperplane_distance(&a, &b, &q).unwrap(), 0.0);
        // radius 13/6 circle centered at (10/3, 0): |(e,e')| = 5/4, distance ln 2
        let c = ExactVector::new(vec![ratio(6, 13), ratio(20, 13), rat(0), ratio(-77, 52)]);
        assert_eq!(q.inner(&a, &c).unwrap(), ratio(-5, 4));
        assert!((hyperplane_distance(&a, &c, &q).unwrap() - 2f64.ln()).abs() < 1e-15);
        // centers 1 apart: (a, d) = 1/2, the circles cross
        let d = ExactVector::new(vec![rat(1), rat(1), rat(0), rat(0)]);
        assert_eq!(q.inner(&a, &d).unwrap(), ratio(1, 2));
        assert!(matches!(hyperplane_distance(&a, &d, &q), Err(Error::IntersectingHyperplanes(_))));
    }

    #[test]
    fn reflections_are_involutive_isometries() {
        let q = QuadraticSpace::new(RationalMatrix::from_i64(&[&[0, 1, 2], &[1, -2, 3], &[2, 3, -2]])).unwrap();
        let alpha = ExactVector::from_i64(&[4, -2, 1]);
        let r = q.reflection(&alpha).unwrap();
        assert!(q.preserved_by(&r).unwrap());
        assert_eq!(&r * &r, RationalMatrix::identity(3));
    }

    fn small_vec(len: usize) -> impl Strategy<Value = ExactVector> {
        proptest::collection::vec((-20i64..20, 1i64..6), len)
            .prop_map(|v| ExactVector::new(v.into_iter().map(|(n, d)| ratio(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn inner_is_symmetric_and_bilinear(
            v in small_vec(4), w in small_vec(4), u in small_vec(4),
            a in -5i64..5, b in -5i64..5,
        ) {
            let q = QuadraticSpace::new(cir(&[1, -1, -1, -1])).unwrap();
            prop_assert_eq!(q.inner(&v, &w).unwrap(), q.inner(&w, &v).unwrap());
            let combo = v.scale(&rat(a)).add_scaled(&rat(b), &w);
            let lhs = q.inner(&combo, &u).unwrap();
            let rhs = rat(a) * q.inner(&v, &u).unwrap() + rat(b) * q.inner(&w, &u).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
