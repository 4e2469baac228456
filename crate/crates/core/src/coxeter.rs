//! Coxeter polytopes given by their Gram matrix `G = ((e_i, e_j))`: dual
//! weights, reality, Maxwell level, reflection matrices and the dual polytope.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{inertia, is_positive_semidefinite, rat, ratio, rational_sqrt, ExactVector, RationalMatrix, Rational};

/// A polytope in hyperbolic space `H^{n+1}` bounded by `n + 2` hyperplanes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterPolytope {
    gram: RationalMatrix,
    gram_inv: RationalMatrix,
    real: Vec<bool>,
}

/// Validate `gram` and compute dual weights.
pub fn build_polytope(gram: RationalMatrix) -> Result<CoxeterPolytope> {
    if !gram.is_square() {
        return Err(Error::NotSquare { rows: gram.rows(), cols: gram.cols() });
    }
    if !gram.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    for i in 0..gram.rows() {
        if !gram[(i, i)].is_one() {
            return Err(Error::NonUnitDiagonal { index: i, value: gram[(i, i)].clone() });
        }
    }
    let gram_inv = gram.inverse()?;
    let ine = inertia(&gram)?;
    if ine.negative != 1 || ine.zero != 0 {
        return Err(Error::WrongSignature {
            want_pos: gram.rows() - 1,
            want_neg: 1,
            found_pos: ine.positive,
            found_neg: ine.negative,
        });
    }
    let real = (0..gram.rows()).map(|i| gram_inv[(i, i)].is_positive()).collect();
    Ok(CoxeterPolytope { gram, gram_inv, real })
}

impl CoxeterPolytope {
    pub fn gram(&self) -> &RationalMatrix {
        &self.gram
    }

    pub fn gram_inv(&self) -> &RationalMatrix {
        &self.gram_inv
    }

    /// Number of facets, `n + 2`.
    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    /// Dimension `n` of the sphere packing.
    pub fn packing_dimension(&self) -> usize {
        self.rank() - 2
    }

    /// Dual weight `ω_i` in coordinates of the normal basis `e`.
    pub fn weight(&self, i: usize) -> ExactVector {
        self.gram_inv.row(i)
    }

    /// `g^{ii} = (ω_i, ω_i)`.
    pub fn weight_norm(&self, i: usize) -> &Rational {
        &self.gram_inv[(i, i)]
    }

    pub fn is_real(&self, i: usize) -> bool {
        self.real[i]
    }

    pub fn real_flags(&self) -> &[bool] {
        &self.real
    }

    pub fn real_indices(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&i| self.real[i]).collect()
    }

    /// All weights real, so the initial cluster has `n + 2` members.
    pub fn is_non_degenerate(&self) -> bool {
        self.real.iter().all(|&r| r)
    }

    /// Normalized weight `ω̄_i = ω_i / sqrt(g^{ii})` as the exact pair `(ω_i, g^{ii})`.
    pub fn normalized_weight(&self, i: usize) -> Result<(ExactVector, Rational)> {
        self.check_index(i)?;
        if !self.real[i] {
            return Err(Error::NonRealWeight(i));
        }
        Ok((self.weight(i), self.weight_norm(i).clone()))
    }

    /// `(ω̄_i, ω̄_j)` when it is rational.
    pub fn normalized_inner(&self, i: usize, j: usize) -> Result<Rational> {
        for k in [i, j] {
            self.check_index(k)?;
            if !self.real[k] {
                return Err(Error::NonRealWeight(k));
            }
        }
        let denom = rational_sqrt(&(self.weight_norm(i) * self.weight_norm(j)))
            .ok_or(Error::IrrationalNormalization(if i == j { i } else { j }))?;
        Ok(&self.gram_inv[(i, j)] / denom)
    }

    /// `(ω̄_i, ω̄_j) <= -1`, decided without square roots.
    pub fn normalized_at_most_minus_one(&self, i: usize, j: usize) -> bool {
        let g = &self.gram_inv[(i, j)];
        g.is_negative() && g * g >= self.weight_norm(i) * self.weight_norm(j)
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.rank() {
            return Err(Error::IndexOutOfRange { index: i, len: self.rank() });
        }
        Ok(())
    }
}

/// Maxwell level of a Coxeter diagram: `Level(l)` for `l <= 2`, else `AboveTwo`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum MaxwellLevel {
    Level(usize),
    AboveTwo,
}

impl fmt::Display for MaxwellLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaxwellLevel::Level(l) => write!(f, "{l}"),
            MaxwellLevel::AboveTwo => write!(f, ">2"),
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Least `l in {0,1,2}` such that deleting any `l` vertices leaves a
/// positive semidefinite (elliptic or parabolic) diagram.
pub fn maxwell_level(gram: &RationalMatrix) -> Result<MaxwellLevel> {
    if !gram.is_square() {
        return Err(Error::NotSquare { rows: gram.rows(), cols: gram.cols() });
    }
    if !gram.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = gram.rows();
    for l in 0..=2 {
        if l >= n {
            return Ok(MaxwellLevel::Level(l));
        }
        let mut all_psd = true;
        for deleted in combinations(n, l) {
            let keep: Vec<usize> = (0..n).filter(|i| !deleted.contains(i)).collect();
            if !is_positive_semidefinite(&gram.principal_submatrix(&keep))? {
                all_psd = false;
                break;
            }
        }
        if all_psd {
            return Ok(MaxwellLevel::Level(l));
        }
    }
    Ok(MaxwellLevel::AboveTwo)
}

pub fn is_packing_polytope(p: &CoxeterPolytope) -> bool {
    matches!(maxwell_level(p.gram()), Ok(MaxwellLevel::Level(_)))
}

/// Matrix of `s_{e_i}` on coordinates in the weight basis; column `j` holds
/// the image of `ω_j`.
pub fn reflection_in_weight_basis(p: &CoxeterPolytope, i: usize) -> Result<RationalMatrix> {
    p.check_index(i)?;
    let mut m = RationalMatrix::identity(p.rank());
    for k in 0..p.rank() {
        m[(k, i)] -= rat(2) * &p.gram()[(k, i)];
    }
    Ok(m)
}

/// Matrix of `s_{ω̄_i}` on coordinates in the normal basis; column `j` holds
/// the image of `e_j`.
pub fn reflection_in_normal_basis(p: &CoxeterPolytope, i: usize) -> Result<RationalMatrix> {
    p.check_index(i)?;
    if !p.is_real(i) {
        return Err(Error::NonRealWeight(i));
    }
    let scale = rat(2) / p.weight_norm(i);
    let mut m = RationalMatrix::identity(p.rank());
    for k in 0..p.rank() {
        m[(k, i)] -= &scale * &p.gram_inv()[(k, i)];
    }
    Ok(m)
}

/// The polytope with Gram matrix `((ω̄_i, ω̄_j))`.
pub fn dual_polytope(p: &CoxeterPolytope) -> Result<CoxeterPolytope> {
    if let Some(i) = (0..p.rank()).find(|&i| !p.is_real(i)) {
        return Err(Error::NonRealWeight(i));
    }
    let n = p.rank();
    for i in 0..n {
        for j in (i + 1)..n {
            if !p.normalized_at_most_minus_one(i, j) {
                return Err(Error::NotPackingDual { i, j });
            }
        }
    }
    let mut rows = vec![vec![Rational::zero(); n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = p.normalized_inner(i, j)?;
        }
    }
    build_polytope(RationalMatrix::from_rows(rows)?)
}

/// `cir(1, -1/(n-1), ..., -1/(n-1))` of size `n + 2`, for `n >= 2`.
pub fn apollonian_gram(n: usize) -> Result<RationalMatrix> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("Apollonian packings need n >= 2, got {n}")));
    }
    let off = ratio(-1, n as i64 - 1);
    let mut first = vec![off; n + 2];
    first[0] = rat(1);
    Ok(RationalMatrix::circulant(&first))
}

/// `cir(1, -1, 0, -1)`.
pub fn boyd_gram() -> RationalMatrix {
    RationalMatrix::circulant(&[rat(1), rat(-1), rat(0), rat(-1)])
}

/// `cir(1, -1, -1)`, the ideal triangle.
pub fn ideal_triangle_gram() -> RationalMatrix {
    RationalMatrix::circulant(&[rat(1), rat(-1), rat(-1)])
}

/// Rank 11 diagram: a path of ten nodes with a further node attached to the
/// third, all edges simple (`-1/2`). It has level 2 and one real weight.
pub fn rank11_level2_gram() -> RationalMatrix {
    let mut m = RationalMatrix::identity(11);
    let mut edge = |a: usize, b: usize| {
        m[(a, b)] = ratio(-1, 2);
        m[(b, a)] = ratio(-1, 2);
    };
    for i in 0..9 {
        edge(i, i + 1);
    }
    edge(2, 10);
    m
}

/// Catalog polytopes by name: `apollonian<n>` or `apollonian:n=<n>`, `boyd`,
/// `ideal-triangle`, `rank11`.
pub fn catalog_gram(name: &str) -> Result<RationalMatrix> {
    let key = name.trim().to_ascii_lowercase();
    let apollonian_n = key
        .strip_prefix("apollonian:n=")
        .or_else(|| key.strip_prefix("apollonian"))
        .filter(|rest| !rest.is_empty())
        .map(|rest| rest.parse::<usize>());
    match (key.as_str(), apollonian_n) {
        (_, Some(Ok(n))) => apollonian_gram(n),
        ("boyd", _) => Ok(boyd_gram()),
        ("ideal-triangle" | "ideal_triangle", _) => Ok(ideal_triangle_gram()),
        ("rank11" | "rank11-level2", _) => Ok(rank11_level2_gram()),
        _ => Err(Error::UnknownModel(name.to_string())),
    }
}

pub fn catalog_polytope(name: &str) -> Result<CoxeterPolytope> {
    build_polytope(catalog_gram(name)?)
}
