//! Quadratic lattices given by Gram matrices: duals, rescaling, even
//! sublattices, discriminant groups and basis changes.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{common_denominator, is_integral, parse_rational, rat, Rational, RationalMatrix};

/// A lattice `Z^r` with a symmetric, nondegenerate Gram matrix. Rescaling
/// may leave the integers; [`IntegralLattice::is_integral`] reports it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralLattice {
    gram: RationalMatrix,
    label: String,
}

impl IntegralLattice {
    pub fn new(gram: RationalMatrix, label: impl Into<String>) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::NotSquare { rows: gram.rows(), cols: gram.cols() });
        }
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if gram.determinant()?.is_zero() {
            return Err(Error::Singular);
        }
        Ok(IntegralLattice { gram, label: label.into() })
    }

    pub fn from_i64(rows: &[&[i64]], label: impl Into<String>) -> Result<Self> {
        Self::new(RationalMatrix::from_i64(rows), label)
    }

    pub fn gram(&self) -> &RationalMatrix {
        &self.gram
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn determinant(&self) -> Rational {
        self.gram.determinant().expect("square by construction")
    }

    pub fn is_integral(&self) -> bool {
        self.gram.is_integral()
    }

    /// Integral with even diagonal.
    pub fn is_even(&self) -> bool {
        self.is_integral() && (0..self.rank()).all(|i| self.gram[(i, i)].numer().is_even())
    }

    fn require_integral(&self) -> Result<()> {
        if self.is_integral() {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("lattice {} is not integral", self.label)))
        }
    }
}

impl fmt::Display for IntegralLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (rank {})", self.label, self.rank())?;
        write!(f, "{}", self.gram)
    }
}

/// Gram matrix of the dual basis.
pub fn dual_gram(l: &IntegralLattice) -> Result<RationalMatrix> {
    l.gram.inverse()
}

/// The dual lattice `L^∨` with its rational form.
pub fn dual_lattice(l: &IntegralLattice) -> Result<IntegralLattice> {
    IntegralLattice::new(dual_gram(l)?, format!("{}^v", l.label))
}

/// `L(t)`: the form multiplied by `t`.
pub fn rescale(l: &IntegralLattice, t: &Rational) -> Result<IntegralLattice> {
    if t.is_zero() {
        return Err(Error::InvalidArgument("rescaling factor must be nonzero".into()));
    }
    IntegralLattice::new(l.gram.scale(t), format!("{}({t})", l.label))
}

/// Least positive integer `e` with `e * gram` integral.
pub fn integral_scale(gram: &RationalMatrix) -> BigInt {
    common_denominator(gram.entries())
}

/// `L^∨/L` as invariant factors `d_1 | d_2 | ...`, each greater than 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantGroup {
    pub invariant_factors: Vec<BigInt>,
}

impl DiscriminantGroup {
    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    /// Largest invariant factor; 1 for the trivial group.
    pub fn exponent(&self) -> BigInt {
        self.invariant_factors.last().cloned().unwrap_or_else(BigInt::one)
    }

    /// Invariant factors of a direct sum of cyclic groups of the given orders.
    pub fn from_cyclic_orders(orders: &[i64]) -> Self {
        let diag: Vec<Vec<BigInt>> = (0..orders.len())
            .map(|i| (0..orders.len()).map(|j| if i == j { BigInt::from(orders[i]) } else { BigInt::zero() }).collect())
            .collect();
        Self::from_smith(smith_diagonal(diag))
    }

    fn from_smith(diag: Vec<BigInt>) -> Self {
        DiscriminantGroup { invariant_factors: diag.into_iter().filter(|d| !d.is_one()).collect() }
    }
}

impl fmt::Display for DiscriminantGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            return write!(f, "trivial");
        }
        let parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Nonzero diagonal of the Smith normal form, as a divisibility chain of
/// positive integers.
pub fn smith_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        // pivot: smallest nonzero entry of the remaining block
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[i][j].is_zero())
            .min_by(|&(i, j), &(k, l)| a[i][j].abs().cmp(&a[k][l].abs()))
        else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut changed = false;
            for i in (t + 1)..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                let pivot = a[t].clone();
                for (x, p) in a[i][t..].iter_mut().zip(&pivot[t..]) {
                    *x -= &q * p;
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    changed = true;
                }
            }
            for j in (t + 1)..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let v = &q * &row[t];
                    row[j] -= v;
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // enforce divisibility of the remaining block by the pivot
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    let source = a[i].clone();
                    for (x, v) in a[t][t..].iter_mut().zip(&source[t..]) {
                        *x += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

fn integer_rows(m: &RationalMatrix) -> Vec<Vec<BigInt>> {
    m.to_rows().into_iter().map(|r| r.into_iter().map(|x| x.to_integer()).collect()).collect()
}

/// Discriminant group of an integral lattice from the Smith form of its Gram matrix.
pub fn discriminant_group(l: &IntegralLattice) -> Result<DiscriminantGroup> {
    l.require_integral()?;
    Ok(DiscriminantGroup::from_smith(smith_diagonal(integer_rows(&l.gram))))
}

/// Largest even sublattice `{v : (v, v) even}`, of index 1 or 2.
pub fn even_sublattice(l: &IntegralLattice) -> Result<IntegralLattice> {
    l.require_integral()?;
    let n = l.rank();
    let odd: Vec<bool> = (0..n).map(|i| l.gram[(i, i)].numer().is_odd()).collect();
    let Some(p) = odd.iter().position(|&o| o) else {
        return Ok(l.clone());
    };
    // (v,v) ≡ Σ g_ii v_i (mod 2): kernel basis 2e_p and e_i - [g_ii odd] e_p
    let mut basis = RationalMatrix::identity(n);
    basis[(p, p)] = rat(2);
    for i in (0..n).filter(|&i| i != p && odd[i]) {
        basis[(p, i)] = rat(-1);
    }
    IntegralLattice::new(l.gram.congruence(&basis)?, format!("{}^ev", l.label))
}

/// `B^T G B` for a basis given by the columns of `b`. Unless `sublattice`
/// is set, `b` must be unimodular.
pub fn gram_in_basis(l: &IntegralLattice, b: &RationalMatrix, sublattice: bool) -> Result<RationalMatrix> {
    if b.rows() != l.rank() {
        return Err(Error::DimensionMismatch { expected: l.rank(), found: b.rows() });
    }
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            if !is_integral(&b[(i, j)]) {
                return Err(Error::NonIntegerBasis(i, j));
            }
        }
    }
    if !sublattice {
        if !b.is_square() {
            return Err(Error::NotSquare { rows: b.rows(), cols: b.cols() });
        }
        let det = b.determinant()?;
        if det.abs() != Rational::one() {
            return Err(Error::NotUnimodular(det));
        }
    }
    l.gram.congruence(b)
}

/// Result of checking `A^T G1 A = G2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsometryCheck {
    pub holds: bool,
    /// First differing entry `(i, j, expected, found)`.
    pub mismatch: Option<(usize, usize, Rational, Rational)>,
}

pub fn verify_isometry(a: &RationalMatrix, g1: &RationalMatrix, g2: &RationalMatrix) -> Result<IsometryCheck> {
    if a.rows() != g1.rows() || a.cols() != g2.rows() || !g1.is_square() || !g2.is_square() {
        return Err(Error::DimensionMismatch { expected: g1.rows(), found: a.rows() });
    }
    let image = g1.congruence(a)?;
    for i in 0..g2.rows() {
        for j in 0..g2.cols() {
            if image[(i, j)] != g2[(i, j)] {
                return Ok(IsometryCheck {
                    holds: false,
                    mismatch: Some((i, j, g2[(i, j)].clone(), image[(i, j)].clone())),
                });
            }
        }
    }
    Ok(IsometryCheck { holds: true, mismatch: None })
}

/// Cartan matrix of type `A_m`.
pub fn cartan_a(m: usize) -> RationalMatrix {
    let mut g = RationalMatrix::identity(m).scale(&rat(2));
    for i in 0..m.saturating_sub(1) {
        g[(i, i + 1)] = rat(-1);
        g[(i + 1, i)] = rat(-1);
    }
    g
}

/// `E_8` Cartan matrix (Bourbaki labelling, node 2 on the branch).
pub fn cartan_e8() -> RationalMatrix {
    let mut g = RationalMatrix::identity(8).scale(&rat(2));
    let edges = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];
    for (a, b) in edges {
        g[(a, b)] = rat(-1);
        g[(b, a)] = rat(-1);
    }
    g
}

/// `Ap(n)`: `cir(1, -1, ..., -1)` of rank `n + 2`.
pub fn apollonian_lattice(n: usize) -> Result<IntegralLattice> {
    let mut first = vec![rat(-1); n + 2];
    first[0] = rat(1);
    IntegralLattice::new(RationalMatrix::circulant(&first), format!("Ap{n}"))
}

/// `Ap(n)^⊥ = Ap(n)^∨(2n)`: `cir(n - 1, -1, ..., -1)`.
pub fn dual_apollonian_lattice(n: usize) -> Result<IntegralLattice> {
    let dual = dual_lattice(&apollonian_lattice(n)?)?;
    let scaled = rescale(&dual, &rat(2 * n as i64))?;
    Ok(IntegralLattice { label: format!("Ap{n}perp"), ..scaled })
}

/// `A_{n-1}^∨(n)` in the basis `(α_2, ..., α_{n-1}, β)` with
/// `β = ϖ_{n-1}`, columns written in fundamental-weight coordinates.
pub fn a_dual_basis(n: usize) -> Result<RationalMatrix> {
    if n < 3 {
        return Err(Error::InvalidArgument("the basis needs n >= 3".into()));
    }
    let m = n - 1;
    let cartan = cartan_a(m);
    let mut cols: Vec<crate::exact::ExactVector> = (1..m).map(|i| cartan.row(i)).collect();
    cols.push(crate::exact::ExactVector::unit(m, m - 1));
    RationalMatrix::from_columns(&cols)
}

/// `A_m^∨` with Gram `C^{-1}` in the fundamental-weight basis.
pub fn a_dual_lattice(m: usize) -> Result<IntegralLattice> {
    IntegralLattice::new(cartan_a(m).inverse()?, format!("A{m}^v"))
}

fn parse_catalog_base(name: &str) -> Result<IntegralLattice> {
    let s = name.trim();
    let num = |t: &str| t.parse::<usize>().map_err(|_| Error::UnknownModel(name.to_string()));
    if let Some(k) = s.strip_prefix('<').and_then(|r| r.strip_suffix('>')) {
        let k = parse_rational(k)?;
        return IntegralLattice::new(RationalMatrix::diagonal(&[k]), s);
    }
    if s == "U" {
        return IntegralLattice::from_i64(&[&[0, 1], &[1, 0]], "U");
    }
    if s == "E8" {
        return IntegralLattice::new(cartan_e8(), "E8");
    }
    if let Some(rest) = s.strip_prefix("Ap") {
        if let Some(n) = rest.strip_suffix("ev") {
            return even_sublattice(&apollonian_lattice(num(n)?)?);
        }
        if let Some(n) = rest.strip_suffix("perp") {
            let n = num(n)?;
            if n == 0 {
                return Err(Error::UnknownModel(name.to_string()));
            }
            return dual_apollonian_lattice(n);
        }
        return apollonian_lattice(num(rest)?);
    }
    if let Some(rest) = s.strip_prefix('A') {
        if let Some(m) = rest.strip_suffix("^v").or_else(|| rest.strip_suffix('v')) {
            return a_dual_lattice(num(m)?);
        }
        let m = num(rest)?;
        if m == 0 {
            return Err(Error::UnknownModel(name.to_string()));
        }
        return IntegralLattice::new(cartan_a(m), format!("A{m}"));
    }
    Err(Error::UnknownModel(name.to_string()))
}

/// Catalog lattices: `<k>`, `U`, `A<m>`, `A<m>^v`, `E8`, `Ap<n>`, `Ap<n>ev`,
/// `Ap<n>perp`, each optionally followed by a rescaling `(t)`.
pub fn catalog_lattice(name: &str) -> Result<IntegralLattice> {
    let s = name.trim();
    if let Some(open) = s.rfind('(') {
        if s.ends_with(')') && !s.starts_with('<') {
            let base = parse_catalog_base(&s[..open])?;
            let t = parse_rational(&s[open + 1..s.len() - 1])?;
            return rescale(&base, &t);
        }
    }
    parse_catalog_base(s)
}
