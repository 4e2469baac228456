//! Orbit counting on hyperbolic lattices of algebraic surfaces: built-in K3
//! models with explicit automorphism matrices, their verification, the
//! counting function `N_T(H, C) = #{C' ∈ Γ C : (H, C') <= T}` and exponent
//! estimates.

use std::collections::HashSet;
use std::fmt;
use std::hash::Hash;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{Num, One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{parse_rational, rat, ExactVector, Rational, RationalMatrix};
use crate::exponent::{counting_function, default_grid, fit_exponent, CountCurve, ExponentEstimate};
use crate::lorentz::{QuadraticSpace, SignatureConvention};

/// How displayed generator matrices act on coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixConvention {
    /// Column `j` is the image of basis vector `j`: `A^T G A = G`.
    Columns,
    /// Row `j` is the image of basis vector `j`; stored transposed.
    Rows,
}

/// A reflection vector with the generator word that should equal its reflection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflectionVector {
    pub label: String,
    pub alpha: ExactVector,
    /// Generator indices whose product (left to right) is the claimed reflection.
    pub word: Vec<usize>,
}

/// A lattice with a group of isometries, an ample class and a default seed class.
#[derive(Clone, Debug)]
pub struct SurfaceModel {
    pub name: String,
    pub space: QuadraticSpace,
    pub basis_labels: Vec<String>,
    pub h: ExactVector,
    pub c: ExactVector,
    /// Working matrices acting on column coordinates.
    pub generators: Vec<(String, RationalMatrix)>,
    pub convention: MatrixConvention,
    pub reflection_vectors: Vec<ReflectionVector>,
    /// Expected α-Gram as `scale * matrix`.
    pub displayed_alpha_gram: Option<(Rational, RationalMatrix)>,
    /// `+1` when heights are `(H, C')`, `-1` for forms of signature `(n, 1)`.
    pub height_sign: Rational,
}

fn matrix(rows: &[&[i64]]) -> RationalMatrix {
    RationalMatrix::from_i64(rows)
}

fn rational_matrix(rows: &[&[&str]]) -> RationalMatrix {
    let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
    RationalMatrix::parse(&rows).expect("built-in matrix")
}

/// Decide how `displayed` acts: columns if `A^T G A = G` for all, rows if
/// the transposes do, otherwise an error naming the first failure.
pub fn detect_convention(gram: &RationalMatrix, displayed: &[RationalMatrix]) -> Result<MatrixConvention> {
    let preserves = |a: &RationalMatrix| gram.congruence(a).map(|g| &g == gram);
    let mut columns = true;
    let mut rows = true;
    for a in displayed {
        columns &= preserves(a)?;
        rows &= preserves(&a.transpose())?;
    }
    match (columns, rows) {
        (true, _) => Ok(MatrixConvention::Columns),
        (false, true) => Ok(MatrixConvention::Rows),
        _ => Err(Error::UnverifiedModel("generators preserve the form under neither convention".into())),
    }
}

impl SurfaceModel {
    /// Model from explicit data. Displayed matrices are checked under both
    /// conventions and stored in the working one.
    #[allow(clippy::too_many_arguments)]
    pub fn custom(
        name: impl Into<String>,
        gram: RationalMatrix,
        convention: SignatureConvention,
        basis_labels: Vec<String>,
        h: ExactVector,
        c: ExactVector,
        generators: Vec<(String, RationalMatrix)>,
        reflection_vectors: Vec<ReflectionVector>,
    ) -> Result<Self> {
        let space = QuadraticSpace::lorentzian(gram, convention)?;
        let dim = space.dim();
        for v in [&h, &c] {
            if v.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
            }
        }
        for (_, a) in &generators {
            if a.rows() != dim || a.cols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: a.rows() });
            }
        }
        let displayed: Vec<RationalMatrix> = generators.iter().map(|g| g.1.clone()).collect();
        let working = if displayed.is_empty() {
            MatrixConvention::Columns
        } else {
            detect_convention(space.gram(), &displayed)?
        };
        let generators = generators
            .into_iter()
            .map(|(l, a)| match working {
                MatrixConvention::Columns => (l, a),
                MatrixConvention::Rows => (l, a.transpose()),
            })
            .collect();
        let height_sign = match convention {
            SignatureConvention::OnePositive => rat(1),
            SignatureConvention::OneNegative => rat(-1),
        };
        let model = SurfaceModel {
            name: name.into(),
            space,
            basis_labels,
            h,
            c,
            generators,
            convention: working,
            reflection_vectors,
            displayed_alpha_gram: None,
            height_sign,
        };
        if !model.height(&model.h)?.is_positive() {
            return Err(Error::InvalidArgument("H must lie in the positive cone".into()));
        }
        Ok(model)
    }

    pub fn gram(&self) -> &RationalMatrix {
        self.space.gram()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// `±(H, v)`, positive on the orbit of a class in the positive cone.
    pub fn height(&self, v: &ExactVector) -> Result<Rational> {
        Ok(&self.height_sign * self.space.inner(&self.h, v)?)
    }

    pub fn with_h(mut self, h: ExactVector) -> Result<Self> {
        if h.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: h.len() });
        }
        self.h = h;
        if !self.height(&self.h)?.is_positive() {
            return Err(Error::InvalidArgument("H must lie in the positive cone".into()));
        }
        Ok(self)
    }

    pub fn with_c(mut self, c: ExactVector) -> Result<Self> {
        if c.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: c.len() });
        }
        self.c = c;
        Ok(self)
    }

    /// Product of generator matrices for a word, left to right.
    pub fn word_matrix(&self, word: &[usize]) -> Result<RationalMatrix> {
        let mut m = RationalMatrix::identity(self.dim());
        for &i in word {
            let (_, a) = self
                .generators
                .get(i)
                .ok_or(Error::IndexOutOfRange { index: i, len: self.generators.len() })?;
            m = m.mul(a)?;
        }
        Ok(m)
    }
}

/// Triangle reflection group `Γ(a, b, c)` with Gram
/// `((1,-a,-b),(-a,1,-c),(-b,-c,1))`; `H = C = ω_1 + ω_2 + ω_3`.
pub fn triangle_model(a: &Rational, b: &Rational, c: &Rational) -> Result<SurfaceModel> {
    if [a, b, c].iter().any(|x| **x < Rational::one()) {
        return Err(Error::InvalidArgument("triangle parameters must be at least 1".into()));
    }
    let g = RationalMatrix::from_rows(vec![
        vec![rat(1), -a.clone(), -b.clone()],
        vec![-a.clone(), rat(1), -c.clone()],
        vec![-b.clone(), -c.clone(), rat(1)],
    ])?;
    let space = QuadraticSpace::lorentzian(g.clone(), SignatureConvention::OneNegative)?;
    let generators = (0..3)
        .map(|i| Ok((format!("s{}", i + 1), space.reflection(&ExactVector::unit(3, i))?)))
        .collect::<Result<Vec<_>>>()?;
    let center = g.inverse()?.mul_vec(&ExactVector::from_i64(&[1, 1, 1]))?;
    let reflection_vectors = (0..3)
        .map(|i| ReflectionVector { label: format!("e{}", i + 1), alpha: ExactVector::unit(3, i), word: vec![i] })
        .collect();
    SurfaceModel::custom(
        format!("triangle({a},{b},{c})"),
        g,
        SignatureConvention::OneNegative,
        vec!["e1".into(), "e2".into(), "e3".into()],
        center.clone(),
        center,
        generators,
        reflection_vectors,
    )
}

fn baragar_p2p2() -> Result<SurfaceModel> {
    let gram = matrix(&[&[0, 1, 2], &[1, -2, 3], &[2, 3, -2]]);
    let generators = vec![
        ("A1".to_string(), matrix(&[&[-1, 0, 0], &[3, 0, 1], &[3, 1, 0]])),
        ("A2".to_string(), matrix(&[&[1, 4, 0], &[0, -1, 0], &[0, 1, 1]])),
        ("A3".to_string(), matrix(&[&[1, 0, 14], &[0, 1, 4], &[0, 0, -1]])),
    ];
    let reflection_vectors = vec![
        ReflectionVector { label: "alpha1".into(), alpha: ExactVector::from_i64(&[-4, 13, 10]), word: vec![0, 1, 0] },
        ReflectionVector { label: "alpha2".into(), alpha: ExactVector::from_i64(&[4, -2, 1]), word: vec![1] },
        ReflectionVector { label: "alpha3".into(), alpha: ExactVector::from_i64(&[7, 2, -1]), word: vec![2] },
    ];
    let h = ExactVector::from_i64(&[1, 1, 1]);
    let mut m = SurfaceModel::custom(
        "baragar_p2p2",
        gram,
        SignatureConvention::OnePositive,
        vec!["f".into(), "s".into(), "r".into()],
        h.clone(),
        h,
        generators,
        reflection_vectors,
    )?;
    m.displayed_alpha_gram = Some((
        rat(-22),
        rational_matrix(&[&["1", "-13/2", "-10"], &["-13/2", "1", "-1"], &["-10", "-1", "1"]]),
    ));
    Ok(m)
}

fn baragar_222() -> Result<SurfaceModel> {
    let gram = matrix(&[&[0, 2, 2, 0], &[2, 0, 2, 0], &[2, 2, 0, 1], &[0, 0, 1, -2]]);
    // columns are images of (f1, f2, f3, r)
    let cols = |c: [[i64; 4]; 4]| {
        RationalMatrix::from_columns(&c.iter().map(|v| ExactVector::from_i64(v)).collect::<Vec<_>>())
            .expect("built-in matrix")
    };
    let phi12 = cols([[1, 0, 0, 0], [0, 1, 0, 0], [2, 2, -1, -1], [0, 0, 0, 1]]);
    let phi13 = cols([[1, 0, 0, 0], [2, -1, 2, 0], [0, 0, 1, 0], [1, 0, 0, -1]]);
    let phi23 = cols([[-1, 2, 2, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 1, 0, -1]]);
    let phi4 = cols([[-1, 0, 8, 4], [0, -1, 8, 4], [0, 0, 1, 0], [0, 0, 0, 1]]);
    let generators = vec![
        ("Phi12".to_string(), phi12),
        ("Phi13".to_string(), phi13),
        ("Phi23".to_string(), phi23),
        ("Phi4'".to_string(), phi4),
    ];
    let reflection_vectors = vec![
        ReflectionVector { label: "alpha1".into(), alpha: ExactVector::from_i64(&[-2, -2, 2, 1]), word: vec![0] },
        ReflectionVector { label: "alpha2".into(), alpha: ExactVector::from_i64(&[-5, 2, -2, -1]), word: vec![1, 0, 1] },
        ReflectionVector { label: "alpha3".into(), alpha: ExactVector::from_i64(&[2, -5, -2, -1]), word: vec![2, 0, 2] },
        ReflectionVector { label: "alpha4".into(), alpha: ExactVector::from_i64(&[2, 2, -30, -15]), word: vec![3, 0, 3] },
    ];
    let h = ExactVector::from_i64(&[1, 1, 1, 0]);
    let mut m = SurfaceModel::custom(
        "baragar_222",
        gram,
        SignatureConvention::OnePositive,
        vec!["f1".into(), "f2".into(), "f3".into(), "r".into()],
        h.clone(),
        h,
        generators,
        reflection_vectors,
    )?;
    m.displayed_alpha_gram = Some((
        rat(-14),
        matrix(&[&[1, -1, -1, -15], &[-1, 1, -6, -13], &[-1, -6, 1, -13], &[-15, -13, -13, 1]]),
    ));
    Ok(m)
}

/// Built-in models: `baragar_p2p2`, `baragar_222`, `triangle(a,b,c)`.
pub fn builtin_model(name: &str) -> Result<SurfaceModel> {
    let key = name.trim();
    match key {
        "baragar_p2p2" => return baragar_p2p2(),
        "baragar_222" => return baragar_222(),
        _ => {}
    }
    if let Some(args) = key.strip_prefix("triangle(").and_then(|r| r.strip_suffix(')')) {
        let parts: Vec<&str> = args.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::UnknownModel(name.to_string()));
        }
        let v = parts.iter().map(|p| parse_rational(p)).collect::<Result<Vec<_>>>()?;
        return triangle_model(&v[0], &v[1], &v[2]);
    }
    Err(Error::UnknownModel(name.to_string()))
}

/// One line of a verification report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub model: String,
    pub convention: MatrixConvention,
    pub checks: Vec<Check>,
    /// `(a, b, c)` when the normalized α-Gram is a triangle-group Gram.
    pub triangle: Option<(Rational, Rational, Rational)>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model {} (convention {:?})", self.model, self.convention)?;
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(f, "{mark} {}", c.name)?;
            } else {
                writeln!(f, "{mark} {}: {}", c.name, c.detail)?;
            }
        }
        if let Some((a, b, c)) = &self.triangle {
            writeln!(f, "triangle group Gamma({a},{b},{c})")?;
        }
        write!(f, "{}", if self.passed() { "all checks passed" } else { "verification failed" })
    }
}

fn residual(found: &RationalMatrix, expected: &RationalMatrix) -> String {
    for i in 0..expected.rows() {
        for j in 0..expected.cols() {
            if found[(i, j)] != expected[(i, j)] {
                return format!("entry ({i},{j}) is {}, expected {}", found[(i, j)], expected[(i, j)]);
            }
        }
    }
    String::new()
}

/// Exact checks of the generator, reflection-vector and α-Gram identities.
pub fn verify_model(m: &SurfaceModel) -> Result<VerificationReport> {
    let g = m.gram();
    let mut checks = Vec::new();
    for (label, a) in &m.generators {
        let image = g.congruence(a)?;
        checks.push(Check {
            name: format!("{label} preserves the form"),
            passed: &image == g,
            detail: residual(&image, g),
        });
    }
    for rv in &m.reflection_vectors {
        let refl = m.space.reflection(&rv.alpha)?;
        let claimed = m.word_matrix(&rv.word)?;
        let names: Vec<&str> = rv.word.iter().map(|&i| m.generators[i].0.as_str()).collect();
        checks.push(Check {
            name: format!("reflection in {} equals {}", rv.label, names.join("*")),
            passed: refl == claimed,
            detail: residual(&refl, &claimed),
        });
    }
    let mut triangle = None;
    if !m.reflection_vectors.is_empty() {
        let alphas: Vec<ExactVector> = m.reflection_vectors.iter().map(|r| r.alpha.clone()).collect();
        let ag = m.space.gram_of(&alphas)?;
        if let Some((scale, shown)) = &m.displayed_alpha_gram {
            let expected = shown.scale(scale);
            checks.push(Check {
                name: format!("alpha Gram equals {scale} * displayed"),
                passed: ag == expected,
                detail: residual(&ag, &expected),
            });
        }
        if alphas.len() == 3 {
            let norm = ag[(0, 0)].clone();
            if !norm.is_zero() && (0..3).all(|i| ag[(i, i)] == norm) {
                let t = ag.scale(&norm.recip());
                let (a, b, c) = (-t[(0, 1)].clone(), -t[(0, 2)].clone(), -t[(1, 2)].clone());
                if [&a, &b, &c].iter().all(|x| **x >= Rational::one()) {
                    triangle = Some((a, b, c));
                }
            }
        }
    }
    Ok(VerificationReport { model: m.name.clone(), convention: m.convention, checks, triangle })
}

/// Orbit of a class under the model's group, bounded by height.
#[derive(Clone, Debug)]
pub struct OrbitCount {
    /// Heights of orbit points with height `<= T`, sorted.
    pub heights: Vec<Rational>,
    pub bound: Rational,
    pub truncated: bool,
    /// The BFS closed without pruning: the orbit is finite.
    pub finite: bool,
    pub explored: usize,
    pub generators: usize,
}

impl OrbitCount {
    pub fn count(&self) -> usize {
        self.heights.len()
    }

    pub fn count_at_most(&self, t: &Rational) -> usize {
        self.heights.partition_point(|h| h <= t)
    }

    pub fn curve(&self, grid: &[f64]) -> Result<CountCurve> {
        let mut curve = counting_function(&self.heights, grid)?;
        if self.truncated {
            curve = curve.with_truncation(None);
        }
        Ok(curve)
    }
}

struct Bfs<T> {
    gens: Vec<Vec<Vec<T>>>,
    covector: Vec<T>,
}

impl<T> Bfs<T>
where
    T: Num + Clone + Ord + Hash + Send + Sync,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    fn apply(m: &[Vec<T>], v: &[T]) -> Vec<T> {
        m.iter()
            .map(|row| row.iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    fn height(&self, v: &[T]) -> T {
        self.covector.iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + a * b)
    }

    /// Heights of all reached points with height `<= bound`, the number of
    /// explored points, and whether any branch was pruned.
    fn run(&self, start: Vec<T>, bound: &T, limit: &T, threads: Option<usize>) -> Result<(Vec<T>, usize, bool)> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.unwrap_or(0))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
        let mut seen: HashSet<Vec<T>> = HashSet::new();
        let mut heights = Vec::new();
        let mut pruned = false;
        let h0 = self.height(&start);
        if &h0 > limit {
            return Ok((heights, 0, true));
        }
        if &h0 <= bound {
            heights.push(h0);
        }
        seen.insert(start.clone());
        let mut frontier = vec![start];
        while !frontier.is_empty() {
            let children: Vec<Vec<(Vec<T>, T)>> = pool.install(|| {
                frontier
                    .par_iter()
                    .map(|v| {
                        self.gens
                            .iter()
                            .map(|g| {
                                let w = Self::apply(g, v);
                                let h = self.height(&w);
                                (w, h)
                            })
                            .collect()
                    })
                    .collect()
            });
            let mut next = Vec::new();
            for (w, h) in children.into_iter().flatten() {
                if &h > limit {
                    pruned = true;
                    continue;
                }
                if seen.contains(&w) {
                    continue;
                }
                seen.insert(w.clone());
                if &h <= bound {
                    heights.push(h);
                }
                next.push(w);
            }
            frontier = next;
        }
        Ok((heights, seen.len(), pruned))
    }
}

fn to_integer_rows(m: &RationalMatrix) -> Option<Vec<Vec<BigInt>>> {
    m.is_integral()
        .then(|| m.to_rows().into_iter().map(|r| r.into_iter().map(|x| x.to_integer()).collect()).collect())
}

fn count_once(m: &SurfaceModel, c: &ExactVector, t: &Rational, slack: &Rational, threads: Option<usize>) -> Result<(Vec<Rational>, usize, bool)> {
    let covector = m.space.covector(&m.h)?.scale(&m.height_sign);
    let limit = t * slack;
    let integral = m.generators.iter().all(|(_, a)| a.is_integral())
        && c.iter().all(|x| x.is_integer())
        && covector.iter().all(|x| x.is_integer());
    if integral && t.is_integer() && limit.is_integer() {
        let bfs = Bfs {
            gens: m.generators.iter().map(|(_, a)| to_integer_rows(a).expect("integral")).collect(),
            covector: covector.iter().map(|x| x.to_integer()).collect(),
        };
        let start = c.iter().map(|x| x.to_integer()).collect();
        let (h, n, p) = bfs.run(start, &t.to_integer(), &limit.to_integer(), threads)?;
        return Ok((h.into_iter().map(Rational::from_integer).collect(), n, p));
    }
    let bfs = Bfs { gens: m.generators.iter().map(|(_, a)| a.to_rows()).collect(), covector: covector.0 };
    bfs.run(c.0.clone(), t, &limit, threads)
}

/// `N_T(H, C)` by BFS over the group, pruning branches above `slack * T`,
/// rerun at twice the slack to detect truncation.
pub fn orbit_count(m: &SurfaceModel, c: &ExactVector, t: &Rational, slack: &Rational, threads: Option<usize>) -> Result<OrbitCount> {
    if c.len() != m.dim() {
        return Err(Error::DimensionMismatch { expected: m.dim(), found: c.len() });
    }
    if *slack < Rational::one() {
        return Err(Error::InvalidArgument("slack must be at least 1".into()));
    }
    let report = verify_model(m)?;
    if let Some(bad) = report.checks.iter().find(|c| !c.passed && c.name.ends_with("preserves the form")) {
        return Err(Error::UnverifiedModel(format!("{}: {}", bad.name, bad.detail)));
    }
    let (mut heights, explored, pruned) = count_once(m, c, t, slack, threads)?;
    let mut truncated = false;
    if pruned {
        let (mut wider, _, _) = count_once(m, c, t, &(slack * rat(2)), threads)?;
        heights.sort();
        wider.sort();
        truncated = wider != heights;
        heights = wider;
    }
    heights.sort();
    Ok(OrbitCount {
        heights,
        bound: t.clone(),
        truncated,
        finite: !pruned,
        explored,
        generators: m.generators.len(),
    })
}

/// Log-log fit of `N_T(H, C)` over the top two decades below `t_max`.
pub fn estimate_surface_exponent(
    m: &SurfaceModel,
    c: &ExactVector,
    t_max: &Rational,
    slack: &Rational,
    threads: Option<usize>,
) -> Result<(ExponentEstimate, OrbitCount)> {
    let count = orbit_count(m, c, t_max, slack, threads)?;
    if count.finite {
        return Err(Error::FiniteOrbit(count.explored));
    }
    let lo = count.heights.first().map(crate::exact::to_f64).unwrap_or(1.0).max(1e-9);
    let hi = crate::exact::to_f64(t_max);
    let curve = count.curve(&default_grid(lo.min(hi), hi))?;
    let estimate = fit_exponent(&curve, 2.0)?;
    Ok((estimate, count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    #[test]
    fn p2p2_displayed_matrices() {
        let m = builtin_model("baragar_p2p2").unwrap();
        assert_eq!(m.convention, MatrixConvention::Columns);
        assert_eq!(m.generators[0].1, matrix(&[&[-1, 0, 0], &[3, 0, 1], &[3, 1, 0]]));
        assert_eq!(m.space.signature(), (1, 2));
        let report = verify_model(&m).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.triangle, Some((ratio(13, 2), rat(10), rat(1))));
    }

    #[test]
    fn p2p2_transposes_fail() {
        let m = builtin_model("baragar_p2p2").unwrap();
        let g = m.gram();
        let a1t = m.generators[0].1.transpose();
        assert_ne!(&g.congruence(&a1t).unwrap(), g);
    }

    #[test]
    fn row_convention_detected_and_stored() {
        let m = builtin_model("baragar_p2p2").unwrap();
        let gens: Vec<(String, RationalMatrix)> = m.generators.iter().map(|(l, a)| (l.clone(), a.transpose())).collect();
        let custom = SurfaceModel::custom(
            "rows",
            m.gram().clone(),
            SignatureConvention::OnePositive,
            m.basis_labels.clone(),
            m.h.clone(),
            m.c.clone(),
            gens,
            Vec::new(),
        )
        .unwrap();
        assert_eq!(custom.convention, MatrixConvention::Rows);
        assert_eq!(custom.generators[0].1, m.generators[0].1);
    }

    #[test]
    fn model_222_verifies() {
        let m = builtin_model("baragar_222").unwrap();
        let report = verify_model(&m).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(m.space.signature(), (1, 3));
    }

    #[test]
    fn triangle_catalog() {
        let m = builtin_model("triangle(1,1,1)").unwrap();
        assert_eq!(m.gram(), &RationalMatrix::circulant(&[rat(1), rat(-1), rat(-1)]));
        assert!(verify_model(&m).unwrap().passed());
        assert!(matches!(builtin_model("nope"), Err(Error::UnknownModel(_))));
        assert!(builtin_model("triangle(1/2,1,1)").is_err());
    }

    #[test]
    fn trivial_group_counts_one() {
        let base = builtin_model("baragar_p2p2").unwrap();
        let m = SurfaceModel::custom(
            "trivial",
            base.gram().clone(),
            SignatureConvention::OnePositive,
            base.basis_labels.clone(),
            base.h.clone(),
            base.c.clone(),
            Vec::new(),
            Vec::new(),
        )
        .unwrap();
        let c = orbit_count(&m, &m.c, &rat(100), &rat(1), None).unwrap();
        assert_eq!(c.count(), 1);
        assert!(c.finite);
        assert!(matches!(estimate_surface_exponent(&m, &m.c, &rat(100), &rat(1), None), Err(Error::FiniteOrbit(1))));
    }

    #[test]
    fn bound_below_seed_counts_zero() {
        let m = builtin_model("baragar_p2p2").unwrap();
        let c = orbit_count(&m, &m.c, &rat(7), &rat(1), None).unwrap();
        assert_eq!(c.count(), 0);
    }

    #[test]
    fn orbit_preserves_norm() {
        let m = builtin_model("baragar_222").unwrap();
        let mut v = m.c.clone();
        let norm = m.space.norm(&v).unwrap();
        for step in 0..40 {
            v = m.generators[step % 4].1.mul_vec(&v).unwrap();
            assert_eq!(m.space.norm(&v).unwrap(), norm);
        }
    }

    fn oracle(m: &SurfaceModel, c: &ExactVector, t: &Rational, depth: usize) -> usize {
        let mut seen: HashSet<ExactVector> = HashSet::new();
        let mut layer = vec![c.clone()];
        seen.insert(c.clone());
        for _ in 0..depth {
            let mut next = Vec::new();
            for v in &layer {
                for (_, a) in &m.generators {
                    let w = a.mul_vec(v).unwrap();
                    if seen.insert(w.clone()) {
                        next.push(w);
                    }
                }
            }
            layer = next;
        }
        seen.iter().filter(|v| &m.height(v).unwrap() <= t).count()
    }

    #[test]
    fn triangle_counts_match_word_oracle() {
        let m = builtin_model("triangle(1,1,1)").unwrap();
        for t in [3, 10, 30] {
            let c = orbit_count(&m, &m.c, &rat(t), &rat(2), Some(2)).unwrap();
            assert!(!c.truncated);
            assert_eq!(c.count(), oracle(&m, &m.c, &rat(t), 10), "T = {t}");
        }
    }

    #[test]
    fn h_side_equals_c_side() {
        let base = builtin_model("triangle(2,2,1)").unwrap();
        let ginv = base.gram().inverse().unwrap();
        let other = ginv.mul_vec(&ExactVector::from_i64(&[1, 2, 3])).unwrap();
        let m1 = base.clone().with_h(other.clone()).unwrap();
        let m2 = base.with_h(m1.c.clone()).unwrap();
        let t = rat(200);
        let a = orbit_count(&m1, &m1.c, &t, &rat(2), None).unwrap();
        let b = orbit_count(&m2, &other, &t, &rat(2), None).unwrap();
        assert_eq!(a.count(), b.count());
        assert!(a.count() > 10);
    }

    #[test]
    fn thread_count_does_not_matter() {
        let m = builtin_model("baragar_p2p2").unwrap();
        let t = rat(100_000);
        let one = orbit_count(&m, &m.c, &t, &rat(2), Some(1)).unwrap();
        let many = orbit_count(&m, &m.c, &t, &rat(2), Some(4)).unwrap();
        assert_eq!(one.heights, many.heights);
    }

    #[test]
    fn unverified_model_rejected() {
        let mut m = builtin_model("baragar_p2p2").unwrap();
        m.generators[0].1 = matrix(&[&[2, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(matches!(orbit_count(&m, &m.c.clone(), &rat(10), &rat(1), None), Err(Error::UnverifiedModel(_))));
    }
}
