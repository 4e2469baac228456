//! Exact breadth-first enumeration of reflection-group orbits of clusters.
//!
//! A cluster is the frame `(γ(b_1), ..., γ(b_{n+2}))` for a group element
//! `γ` and a fixed basis `b`: the normalized dual weights (sphere packings)
//! or the unit normals. Extending the word of `γ` by a generator `s_i` maps
//! the frame linearly, so one rule updates vectors and curvatures alike, in
//! any coordinates. Vectors live either in the fundamental form (an explicit
//! Euclidean realization) or in the polytope's own normal-basis coordinates,
//! which stay rational even when no rational Euclidean realization exists.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::coxeter::{is_packing_polytope, CoxeterPolytope};
use crate::error::{Error, Result};
use crate::exact::{is_integral, parse_rational, rat, rational_sqrt, to_f64, ExactVector, Rational, RationalMatrix};
use crate::inversive::{sphere_from_vector, vector_from_sphere, EuclideanSphere, SphereVector};
use crate::lorentz::QuadraticSpace;

/// Which basis the cluster frame is the image of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FrameKind {
    /// Normalized dual weights; the real ones are the cluster spheres.
    Weights,
    /// Unit normals `e_i`; every slot is a cluster member.
    Normals,
}

#[derive(Debug)]
struct Shape {
    kind: FrameKind,
    space: QuadraticSpace,
    fundamental: bool,
    /// `update[i]` lists `(k, m_ik)` with `new_i = Σ_k m_ik frame_k` (weights),
    /// or `(j, c_j)` with `new_j = frame_j + c_j frame_i` (normals).
    update: Vec<Vec<(usize, Rational)>>,
    visible: Vec<usize>,
    expected_gram: RationalMatrix,
    soddy_form: RationalMatrix,
    sigma: Vec<Rational>,
    non_degenerate: bool,
}

/// One orbit representative: the frame of a group element and its curvatures.
#[derive(Clone, Debug)]
pub struct Cluster {
    shape: Arc<Shape>,
    frame: Vec<ExactVector>,
    curvatures: Option<Vec<Rational>>,
    word: Vec<usize>,
}

impl PartialEq for Cluster {
    fn eq(&self, other: &Self) -> bool {
        self.frame == other.frame && self.curvatures == other.curvatures
    }
}

impl Eq for Cluster {}

impl Cluster {
    pub fn kind(&self) -> FrameKind {
        self.shape.kind
    }

    /// True when vectors are Euclidean sphere vectors in the fundamental form.
    pub fn is_fundamental(&self) -> bool {
        self.shape.fundamental
    }

    pub fn space(&self) -> &QuadraticSpace {
        &self.shape.space
    }

    pub fn rank(&self) -> usize {
        self.frame.len()
    }

    /// Full frame, including hidden images of non-real weights.
    pub fn frame(&self) -> &[ExactVector] {
        &self.frame
    }

    /// Frame slots that are spheres of the packing.
    pub fn member_slots(&self) -> &[usize] {
        &self.shape.visible
    }

    pub fn members(&self) -> Vec<&ExactVector> {
        self.shape.visible.iter().map(|&i| &self.frame[i]).collect()
    }

    /// Curvatures of the member spheres.
    pub fn curvatures(&self) -> Option<Vec<Rational>> {
        let k = self.curvatures.as_ref()?;
        Some(self.shape.visible.iter().map(|&i| k[i].clone()).collect())
    }

    /// Curvature of every frame slot.
    pub fn frame_curvatures(&self) -> Option<&[Rational]> {
        self.curvatures.as_deref()
    }

    /// Generator indices applied to the seed, in order.
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn is_non_degenerate(&self) -> bool {
        self.shape.non_degenerate
    }

    /// Gram matrix the members must have at every depth.
    pub fn expected_gram(&self) -> &RationalMatrix {
        &self.shape.expected_gram
    }

    /// Gram matrix of the current members.
    pub fn member_gram(&self) -> Result<RationalMatrix> {
        let members: Vec<ExactVector> = self.members().into_iter().cloned().collect();
        self.shape.space.gram_of(&members)
    }

    /// Value of the generalized Descartes form on the curvatures; zero for
    /// every valid cluster. `None` without curvatures or for degenerate frames.
    pub fn soddy_residual(&self) -> Option<Rational> {
        if !self.shape.non_degenerate {
            return None;
        }
        let k = self.curvatures.as_ref()?;
        let sk: Vec<Rational> = k.iter().zip(&self.shape.sigma).map(|(a, s)| a * s).collect();
        let q = &self.shape.soddy_form;
        let mut total = Rational::zero();
        for i in 0..sk.len() {
            for j in 0..sk.len() {
                total += &sk[i] * &q[(i, j)] * &sk[j];
            }
        }
        Some(total)
    }

    /// Members as sphere vectors, for clusters realized in the fundamental form.
    pub fn sphere_vectors(&self) -> Option<Vec<SphereVector>> {
        if !self.shape.fundamental {
            return None;
        }
        self.members().into_iter().map(|v| SphereVector::new(v.clone()).ok()).collect()
    }

    pub fn apply(&self, i: usize) -> Result<Cluster> {
        apply_generator(self, i)
    }
}

fn check_packing_sigma(p: &CoxeterPolytope) -> Result<(usize, Vec<Rational>)> {
    let real = p.real_indices();
    let &r = real.first().ok_or(Error::NoRealWeights)?;
    let grr = p.weight_norm(r).clone();
    let mut sigma = Vec::with_capacity(p.rank());
    for k in 0..p.rank() {
        if p.is_real(k) {
            let s = rational_sqrt(&(p.weight_norm(k) / &grr)).ok_or(Error::IrrationalNormalization(k))?;
            sigma.push(s);
        } else {
            sigma.push(Rational::one());
        }
    }
    Ok((r, sigma))
}

fn weight_shape(p: &CoxeterPolytope, space: QuadraticSpace, fundamental: bool) -> Result<Shape> {
    let (r, sigma) = check_packing_sigma(p)?;
    let n = p.rank();
    let g = p.gram();
    let update = (0..n)
        .map(|i| {
            (0..n)
                .filter_map(|k| {
                    // new_i = frame_i - (2/σ_i) Σ_k g_ik σ_k frame_k
                    let mut m = -(rat(2) / &sigma[i]) * &g[(i, k)] * &sigma[k];
                    if k == i {
                        m += Rational::one();
                    }
                    (!m.is_zero()).then_some((k, m))
                })
                .collect()
        })
        .collect();
    let visible = p.real_indices();
    let grr = p.weight_norm(r);
    let rows = visible
        .iter()
        .map(|&i| visible.iter().map(|&j| &p.gram_inv()[(i, j)] / (grr * &sigma[i] * &sigma[j])).collect())
        .collect();
    Ok(Shape {
        kind: FrameKind::Weights,
        space,
        fundamental,
        update,
        visible,
        expected_gram: RationalMatrix::from_rows(rows)?,
        soddy_form: g.clone(),
        sigma,
        non_degenerate: p.is_non_degenerate(),
    })
}

fn abstract_weight_space(p: &CoxeterPolytope) -> Result<QuadraticSpace> {
    let (r, _) = check_packing_sigma(p)?;
    QuadraticSpace::new(p.gram().scale(&p.weight_norm(r).recip()))
}

/// Frame of the normalized dual weights in normal-basis coordinates, with
/// the form `G / g^{rr}` for the first real weight `r`. Members are the real
/// weights; no curvatures are attached.
pub fn initial_cluster(p: &CoxeterPolytope) -> Result<Cluster> {
    let shape = weight_shape(p, abstract_weight_space(p)?, false)?;
    let frame = (0..p.rank()).map(|k| p.weight(k).scale(&shape.sigma[k].recip())).collect();
    Ok(Cluster { shape: Arc::new(shape), frame, curvatures: None, word: Vec::new() })
}

fn check_soddy(c: &Cluster) -> Result<()> {
    match c.soddy_residual() {
        Some(res) if !res.is_zero() => Err(Error::SoddyViolation { residual: res }),
        _ => Ok(()),
    }
}

/// Cluster with prescribed curvatures. With a realization, vectors are the
/// exact sphere vectors of the given spheres; without one, the initial
/// cluster is used and the curvatures define the curvature functional.
pub fn seed_cluster_from_curvatures(
    p: &CoxeterPolytope,
    k: &[Rational],
    realization: Option<&[EuclideanSphere]>,
) -> Result<Cluster> {
    if !p.is_non_degenerate() {
        return Err(Error::DegenerateCluster(
            "curvatures determine a cluster only when every weight is real".into(),
        ));
    }
    if k.len() != p.rank() {
        return Err(Error::DimensionMismatch { expected: p.rank(), found: k.len() });
    }
    let base = initial_cluster(p)?;
    let cluster = match realization {
        None => Cluster { curvatures: Some(k.to_vec()), ..base },
        Some(spheres) => {
            if spheres.len() != p.rank() {
                return Err(Error::DimensionMismatch { expected: p.rank(), found: spheres.len() });
            }
            let mut frame = Vec::with_capacity(spheres.len());
            for (j, s) in spheres.iter().enumerate() {
                if s.dimension() != p.packing_dimension() {
                    return Err(Error::DimensionMismatch {
                        expected: p.packing_dimension(),
                        found: s.dimension(),
                    });
                }
                if s.curvature() != k[j] {
                    return Err(Error::InvalidArgument(format!(
                        "sphere {j} has curvature {}, expected {}",
                        s.curvature(),
                        k[j]
                    )));
                }
                frame.push(vector_from_sphere(s)?.into_vector());
            }
            let space = QuadraticSpace::fundamental(p.packing_dimension());
            let shape = weight_shape(p, space, true)?;
            let expected = &shape.expected_gram;
            for i in 0..frame.len() {
                for j in i..frame.len() {
                    let found = shape.space.inner(&frame[i], &frame[j])?;
                    if found != expected[(i, j)] {
                        return Err(Error::GramMismatch { i, j, expected: Box::new(expected[(i, j)].clone()), found: Box::new(found) });
                    }
                }
            }
            Cluster { shape: Arc::new(shape), frame, curvatures: Some(k.to_vec()), word: Vec::new() }
        }
    };
    check_soddy(&cluster)?;
    Ok(cluster)
}

/// Cluster of the unit normals `e_i` (mutual products `g_ij`) with the given
/// curvatures; the Descartes form is `k^T G^{-1} k`. Used for `n = 1`, where
/// no weight is real.
pub fn member_cluster(p: &CoxeterPolytope, k: &[Rational]) -> Result<Cluster> {
    let n = p.rank();
    if k.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: k.len() });
    }
    let g = p.gram();
    let update = (0..n)
        .map(|i| {
            (0..n)
                .filter_map(|j| {
                    let c = rat(-2) * &g[(i, j)];
                    (!c.is_zero()).then_some((j, c))
                })
                .collect()
        })
        .collect();
    let shape = Shape {
        kind: FrameKind::Normals,
        space: QuadraticSpace::new(g.clone())?,
        fundamental: false,
        update,
        visible: (0..n).collect(),
        expected_gram: g.clone(),
        soddy_form: p.gram_inv().clone(),
        sigma: vec![Rational::one(); n],
        non_degenerate: true,
    };
    let cluster = Cluster {
        shape: Arc::new(shape),
        frame: (0..n).map(|j| ExactVector::unit(n, j)).collect(),
        curvatures: Some(k.to_vec()),
        word: Vec::new(),
    };
    check_soddy(&cluster)?;
    Ok(cluster)
}

fn combine(terms: &[(usize, Rational)], values: &[ExactVector]) -> ExactVector {
    let len = values[0].len();
    let coords = (0..len)
        .map(|t| terms.iter().map(|(k, m)| m * &values[*k][t]).sum())
        .collect();
    ExactVector::new(coords)
}

/// Image of the cluster under generator `i` (the word gains `s_i`).
/// For a weight frame exactly one slot changes; for an Apollonian Gram the
/// changed curvature is the Descartes swap.
pub fn apply_generator(c: &Cluster, i: usize) -> Result<Cluster> {
    if i >= c.rank() {
        return Err(Error::IndexOutOfRange { index: i, len: c.rank() });
    }
    let terms = &c.shape.update[i];
    let mut frame = c.frame.clone();
    let mut curvatures = c.curvatures.clone();
    match c.shape.kind {
        FrameKind::Weights => {
            frame[i] = combine(terms, &c.frame);
            if let (Some(new), Some(old)) = (curvatures.as_mut(), c.curvatures.as_ref()) {
                new[i] = terms.iter().map(|(k, m)| m * &old[*k]).sum();
            }
        }
        FrameKind::Normals => {
            for (j, coef) in terms {
                frame[*j] = frame[*j].add_scaled(coef, &c.frame[i]);
                if let (Some(new), Some(old)) = (curvatures.as_mut(), c.curvatures.as_ref()) {
                    new[*j] = &old[*j] + coef * &old[i];
                }
            }
        }
    }
    let mut word = c.word.clone();
    word.push(i);
    Ok(Cluster { shape: Arc::clone(&c.shape), frame, curvatures, word })
}

/// Reflect every member of a normal-frame cluster in member `i`:
/// `v_j -> v_j - 2 (v_j, v_i) v_i`.
pub fn reflect_in_member(c: &Cluster, i: usize) -> Result<Cluster> {
    if c.kind() != FrameKind::Normals {
        return Err(Error::Unsupported("member reflection acts on normal-frame clusters".into()));
    }
    apply_generator(c, i)
}

/// Breadth-first cluster orbit over reduced words, deduplicated by frame,
/// stopping after `max_depth` levels or `max_clusters` clusters.
pub fn cluster_orbit(seed: &Cluster, max_depth: usize, max_clusters: usize) -> Result<Vec<Cluster>> {
    let mut seen: HashSet<Vec<ExactVector>> = HashSet::new();
    seen.insert(seed.frame.clone());
    let mut out = vec![seed.clone()];
    let mut frontier = vec![seed.clone()];
    for _ in 0..max_depth {
        let mut next = Vec::new();
        for c in &frontier {
            for i in 0..c.rank() {
                if c.word.last() == Some(&i) {
                    continue;
                }
                let child = apply_generator(c, i)?;
                if seen.insert(child.frame.clone()) {
                    if out.len() >= max_clusters {
                        return Ok(out);
                    }
                    out.push(child.clone());
                    next.push(child);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(out)
}

/// Axis-aligned box on sphere centers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub min: Vec<Rational>,
    pub max: Vec<Rational>,
}

impl Region {
    pub fn new(min: Vec<Rational>, max: Vec<Rational>) -> Result<Self> {
        if min.len() != max.len() {
            return Err(Error::DimensionMismatch { expected: min.len(), found: max.len() });
        }
        if min.iter().zip(&max).any(|(a, b)| a > b) {
            return Err(Error::InvalidArgument("region minimum exceeds maximum".into()));
        }
        Ok(Region { min, max })
    }

    pub fn contains(&self, point: &[Rational]) -> bool {
        point.iter().zip(self.min.iter().zip(&self.max)).all(|(x, (a, b))| a <= x && x <= b)
    }

    /// Box scaled by `factor` about its center.
    pub fn dilate(&self, factor: &Rational) -> Region {
        let half = rat(2).recip();
        let (min, max) = self
            .min
            .iter()
            .zip(&self.max)
            .map(|(a, b)| {
                let c = (a + b) * &half;
                let h = (b - a) * &half * factor;
                (&c - &h, &c + &h)
            })
            .unzip();
        Region { min, max }
    }

    /// Whether the closed ball meets the box.
    pub fn meets_ball(&self, center: &[Rational], radius: &Rational) -> bool {
        let mut d2 = Rational::zero();
        for (x, (a, b)) in center.iter().zip(self.min.iter().zip(&self.max)) {
            let gap = if x < a {
                a - x
            } else if x > b {
                x - b
            } else {
                continue;
            };
            d2 += &gap * &gap;
        }
        d2 <= radius * radius
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumerationMode {
    /// Prune by curvature against `slack * T`.
    Bounded,
    /// Expand every reduced word up to the given length.
    DepthLimited(usize),
}

#[derive(Clone, Debug)]
pub struct EnumerationOptions {
    pub bound: Option<Rational>,
    pub mode: EnumerationMode,
    pub slack: Rational,
    /// Rerun at twice the slack and flag truncation on any difference.
    pub convergence_check: bool,
    /// Worker threads; `None` uses the available parallelism.
    pub threads: Option<usize>,
    /// Counting region on centers; required for unbounded packings.
    pub region: Option<Region>,
    /// Cluster budget; exceeding it yields a resumable checkpoint.
    pub max_clusters: Option<usize>,
}

impl EnumerationOptions {
    /// Curvature-bounded enumeration with slack 1 and no convergence rerun.
    pub fn bounded(t: Rational) -> Self {
        EnumerationOptions {
            bound: Some(t),
            mode: EnumerationMode::Bounded,
            slack: Rational::one(),
            convergence_check: false,
            threads: None,
            region: None,
            max_clusters: None,
        }
    }

    /// Bounded enumeration for general polytopes: slack 4 with a convergence rerun.
    pub fn bounded_checked(t: Rational) -> Self {
        EnumerationOptions { slack: rat(4), convergence_check: true, ..Self::bounded(t) }
    }

    pub fn depth_limited(depth: usize, bound: Option<Rational>) -> Self {
        EnumerationOptions { bound, mode: EnumerationMode::DepthLimited(depth), ..Self::bounded(Rational::one()) }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }
}

/// A sphere of the packing: its vector in the cluster's ambient form and
/// its curvature when known.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitSphere {
    pub vector: ExactVector,
    pub curvature: Option<Rational>,
}

/// Result of an enumeration: distinct spheres sorted by exact coordinates.
#[derive(Clone, Debug)]
pub struct PackingOrbit {
    pub spheres: Vec<OrbitSphere>,
    pub space: QuadraticSpace,
    pub fundamental: bool,
    pub curvature_bound: Option<Rational>,
    pub truncated: bool,
    pub clusters_visited: usize,
    pub depth_reached: usize,
    /// Counting was restricted to a region because the packing is unbounded.
    pub region: Option<Region>,
}

impl PackingOrbit {
    pub fn len(&self) -> usize {
        self.spheres.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spheres.is_empty()
    }

    /// Sorted positive curvatures.
    pub fn positive_curvatures(&self) -> Vec<Rational> {
        let mut k: Vec<Rational> = self
            .spheres
            .iter()
            .filter_map(|s| s.curvature.clone())
            .filter(|k| k.is_positive())
            .collect();
        k.sort();
        k
    }

    /// Number of spheres with `0 < k <= t`.
    pub fn count_at_most(&self, t: &Rational) -> usize {
        self.spheres
            .iter()
            .filter(|s| s.curvature.as_ref().is_some_and(|k| k.is_positive() && k <= t))
            .count()
    }

    /// Exact Euclidean spheres when realized in the fundamental form.
    pub fn euclidean_spheres(&self) -> Option<Vec<EuclideanSphere>> {
        if !self.fundamental {
            return None;
        }
        self.spheres
            .iter()
            .map(|s| SphereVector::new(s.vector.clone()).ok().map(|v| sphere_from_vector(&v)))
            .collect()
    }

    pub fn vectors(&self) -> Vec<&ExactVector> {
        self.spheres.iter().map(|s| &s.vector).collect()
    }
}

/// Resumable enumeration state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub depth: usize,
    pub clusters_visited: usize,
    pub spheres: Vec<OrbitSphere>,
    pub frontier: Vec<Vec<usize>>,
}

const CHECKPOINT_HEADER: &str = "PACKLAB-CHECKPOINT v1";

impl Checkpoint {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{CHECKPOINT_HEADER}");
        let _ = writeln!(out, "depth {}", self.depth);
        let _ = writeln!(out, "clusters {}", self.clusters_visited);
        let _ = writeln!(out, "spheres {}", self.spheres.len());
        for s in &self.spheres {
            let _ = write!(out, "{}", s.vector.len());
            for x in s.vector.iter() {
                let _ = write!(out, " {x}");
            }
            match &s.curvature {
                Some(k) => {
                    let _ = writeln!(out, " ; {k}");
                }
                None => {
                    let _ = writeln!(out, " ; -");
                }
            }
        }
        let _ = writeln!(out, "frontier {}", self.frontier.len());
        for w in &self.frontier {
            if w.is_empty() {
                let _ = writeln!(out, "-");
            } else {
                let items: Vec<String> = w.iter().map(usize::to_string).collect();
                let _ = writeln!(out, "{}", items.join(" "));
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Checkpoint(msg.to_string());
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some(CHECKPOINT_HEADER) {
            return Err(bad("missing or unsupported header"));
        }
        let field = |lines: &mut std::str::Lines<'_>, name: &str| -> Result<usize> {
            let line = lines.next().ok_or_else(|| bad("unexpected end of file"))?;
            line.strip_prefix(name)
                .and_then(|rest| rest.trim().parse().ok())
                .ok_or_else(|| Error::Checkpoint(format!("expected `{name} <count>`, found {line:?}")))
        };
        let depth = field(&mut lines, "depth")?;
        let clusters_visited = field(&mut lines, "clusters")?;
        let count = field(&mut lines, "spheres")?;
        let mut spheres = Vec::with_capacity(count);
        for _ in 0..count {
            let line = lines.next().ok_or_else(|| bad("truncated sphere list"))?;
            let (coords, curv) = line.split_once(';').ok_or_else(|| bad("sphere line lacks `;`"))?;
            let mut items = coords.split_whitespace();
            let len: usize = items
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad("sphere line lacks a length prefix"))?;
            let vector = items.map(parse_rational).collect::<Result<Vec<_>>>()?;
            if vector.len() != len {
                return Err(bad("sphere length prefix does not match"));
            }
            let curv = curv.trim();
            let curvature = if curv == "-" { None } else { Some(parse_rational(curv)?) };
            spheres.push(OrbitSphere { vector: ExactVector::new(vector), curvature });
        }
        let count = field(&mut lines, "frontier")?;
        let mut frontier = Vec::with_capacity(count);
        for _ in 0..count {
            let line = lines.next().ok_or_else(|| bad("truncated frontier"))?.trim();
            if line == "-" {
                frontier.push(Vec::new());
            } else {
                let word = line
                    .split_whitespace()
                    .map(|s| s.parse::<usize>().map_err(|_| bad("frontier word is not a list of indices")))
                    .collect::<Result<Vec<_>>>()?;
                frontier.push(word);
            }
        }
        Ok(Checkpoint { depth, clusters_visited, spheres, frontier })
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::Checkpoint(e.to_string()))
    }

    pub fn read_from(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Checkpoint(e.to_string()))?;
        Self::from_text(&text)
    }
}

struct Search<'a> {
    options: &'a EnumerationOptions,
    slack: Rational,
    prune_region: Option<Region>,
}

/// Children of one cluster with the member slots each step changed.
type Expansion = Vec<(Cluster, Vec<usize>)>;

impl Search<'_> {
    fn center_and_radius(v: &ExactVector) -> Option<(Vec<Rational>, Rational)> {
        let k = &v[0];
        if k.is_zero() {
            return None;
        }
        let n = v.len() - 2;
        Some(((1..=n).map(|i| &v[i] / k).collect(), k.abs().recip()))
    }

    /// Keep a child whose new sphere has curvature `k` and vector `v`.
    fn keep(&self, k: Option<&Rational>, v: &ExactVector) -> bool {
        if self.options.mode != EnumerationMode::Bounded {
            return true;
        }
        if let (Some(t), Some(k)) = (&self.options.bound, k) {
            if k > &(t * &self.slack) {
                return false;
            }
        }
        if let Some(region) = &self.prune_region {
            if let Some((c, r)) = Self::center_and_radius(v) {
                return region.meets_ball(&c, &r);
            }
        }
        true
    }

    /// Whether a non-seed sphere is counted.
    fn counts(&self, k: Option<&Rational>, v: &ExactVector) -> bool {
        if let Some(k) = k {
            if !k.is_positive() {
                return false;
            }
            if let Some(t) = &self.options.bound {
                if k > t {
                    return false;
                }
            }
        }
        if let Some(region) = &self.options.region {
            return Self::center_and_radius(v).is_some_and(|(c, _)| region.contains(&c));
        }
        true
    }

    fn expand(&self, c: &Cluster) -> Result<Expansion> {
        let mut out = Vec::new();
        for i in 0..c.rank() {
            if c.word.last() == Some(&i) {
                continue;
            }
            let child = apply_generator(c, i)?;
            let changed: Vec<usize> = match c.kind() {
                FrameKind::Weights => {
                    if c.shape.visible.contains(&i) {
                        vec![i]
                    } else {
                        Vec::new()
                    }
                }
                FrameKind::Normals => c.shape.visible.clone(),
            };
            let keep = changed.iter().all(|&j| {
                let k = child.curvatures.as_ref().map(|k| &k[j]);
                self.keep(k, &child.frame[j])
            });
            if keep {
                out.push((child, changed));
            }
        }
        Ok(out)
    }
}

fn validate(p: &CoxeterPolytope, seed: &Cluster, options: &EnumerationOptions) -> Result<()> {
    if !is_packing_polytope(p) {
        return Err(Error::NotPackingPolytope);
    }
    if seed.rank() != p.rank() {
        return Err(Error::DimensionMismatch { expected: p.rank(), found: seed.rank() });
    }
    if let Some(t) = &options.bound {
        if !t.is_positive() {
            return Err(Error::InvalidArgument("curvature bound must be positive".into()));
        }
    }
    if options.slack < Rational::one() {
        return Err(Error::InvalidArgument("slack must be at least 1".into()));
    }
    if let Some(region) = &options.region {
        if !seed.is_fundamental() {
            return Err(Error::Unsupported("a counting region needs a Euclidean realization".into()));
        }
        if region.min.len() != p.packing_dimension() {
            return Err(Error::DimensionMismatch { expected: p.packing_dimension(), found: region.min.len() });
        }
    }
    if options.mode == EnumerationMode::Bounded {
        if options.bound.is_none() {
            return Err(Error::InvalidArgument("bounded mode needs a curvature bound".into()));
        }
        if !seed.is_non_degenerate() {
            return Err(Error::DegenerateCluster("bounded enumeration needs every weight real".into()));
        }
        let k = seed.curvatures().ok_or(Error::NoCurvature)?;
        if !k.iter().any(Signed::is_negative) && options.region.is_none() {
            return Err(Error::UnboundedPacking);
        }
    }
    Ok(())
}

fn run_search(
    seed: &Cluster,
    options: &EnumerationOptions,
    slack: Rational,
    resume: Option<&Checkpoint>,
) -> Result<PackingOrbit> {
    let prune_region = options.region.as_ref().map(|r| r.dilate(&slack));
    let search = Search { options, slack, prune_region };
    let mut spheres: BTreeMap<ExactVector, Option<Rational>> = BTreeMap::new();
    let mut seen: HashSet<Vec<ExactVector>> = HashSet::new();
    let mut frontier: Vec<Cluster>;
    let mut depth;
    let mut visited;
    match resume {
        None => {
            let k = seed.curvatures();
            for (idx, v) in seed.members().into_iter().enumerate() {
                spheres.insert(v.clone(), k.as_ref().map(|k| k[idx].clone()));
            }
            seen.insert(seed.frame.clone());
            frontier = vec![seed.clone()];
            depth = 0;
            visited = 1;
        }
        Some(cp) => {
            for s in &cp.spheres {
                spheres.insert(s.vector.clone(), s.curvature.clone());
            }
            frontier = Vec::with_capacity(cp.frontier.len());
            for word in &cp.frontier {
                let mut c = seed.clone();
                for &i in word {
                    c = apply_generator(&c, i)?;
                }
                seen.insert(c.frame.clone());
                frontier.push(c);
            }
            depth = cp.depth;
            visited = cp.clusters_visited;
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let mut truncated = false;
    while !frontier.is_empty() {
        if let EnumerationMode::DepthLimited(max) = options.mode {
            if depth >= max {
                truncated = true;
                break;
            }
        }
        if let Some(limit) = options.max_clusters {
            if visited > limit {
                let checkpoint = Checkpoint {
                    depth,
                    clusters_visited: visited,
                    spheres: spheres
                        .into_iter()
                        .map(|(vector, curvature)| OrbitSphere { vector, curvature })
                        .collect(),
                    frontier: frontier.into_iter().map(|c| c.word).collect(),
                };
                return Err(Error::BudgetExceeded { limit, checkpoint: Box::new(checkpoint) });
            }
        }
        let children: Vec<Result<Expansion>> =
            pool.install(|| frontier.par_iter().map(|c| search.expand(c)).collect());
        let mut next = Vec::new();
        for batch in children {
            for (child, changed) in batch? {
                if !seen.insert(child.frame.clone()) {
                    continue;
                }
                visited += 1;
                for j in changed {
                    let v = &child.frame[j];
                    let k = child.curvatures.as_ref().map(|k| &k[j]);
                    if search.counts(k, v) {
                        spheres.entry(v.clone()).or_insert_with(|| k.cloned());
                    }
                }
                next.push(child);
            }
        }
        frontier = next;
        depth += 1;
    }
    Ok(PackingOrbit {
        spheres: spheres.into_iter().map(|(vector, curvature)| OrbitSphere { vector, curvature }).collect(),
        space: seed.shape.space.clone(),
        fundamental: seed.is_fundamental(),
        curvature_bound: options.bound.clone(),
        truncated,
        clusters_visited: visited,
        depth_reached: depth,
        region: options.region.clone(),
    })
}

/// Enumerate the packing generated by `seed` under the reflection group of `p`.
pub fn enumerate_packing(p: &CoxeterPolytope, seed: &Cluster, options: &EnumerationOptions) -> Result<PackingOrbit> {
    resume_packing(p, seed, options, None)
}

/// Continue an enumeration from a checkpoint produced by a budget overrun.
pub fn resume_packing(
    p: &CoxeterPolytope,
    seed: &Cluster,
    options: &EnumerationOptions,
    checkpoint: Option<&Checkpoint>,
) -> Result<PackingOrbit> {
    validate(p, seed, options)?;
    let mut orbit = run_search(seed, options, options.slack.clone(), checkpoint)?;
    if options.convergence_check && options.mode == EnumerationMode::Bounded {
        let wider = run_search(seed, options, &options.slack * rat(2), None)?;
        if wider.spheres != orbit.spheres {
            orbit = PackingOrbit { truncated: true, ..wider };
        }
    }
    Ok(orbit)
}

/// Outcome of an integrality check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralityReport {
    pub integral: bool,
    /// Least `λ` with `λ (v_i, v_j)` integral over the sampled pairs.
    pub exponent: Option<BigInt>,
    /// A non-integral curvature, when one exists.
    pub witness: Option<Rational>,
}

/// Check that all curvatures are integers and find the exponent over the
/// first `sample` spheres.
pub fn certify_integral(orbit: &PackingOrbit, sample: usize) -> Result<IntegralityReport> {
    if orbit.is_empty() {
        return Err(Error::InvalidArgument("cannot certify an empty orbit".into()));
    }
    let witness = orbit
        .spheres
        .iter()
        .filter_map(|s| s.curvature.as_ref())
        .find(|k| !is_integral(k))
        .cloned();
    let chosen: Vec<&ExactVector> = orbit.spheres.iter().take(sample.max(1)).map(|s| &s.vector).collect();
    let mut lambda = BigInt::one();
    for i in 0..chosen.len() {
        for j in i..chosen.len() {
            let p = orbit.space.inner(chosen[i], chosen[j])?;
            lambda = lambda.lcm(p.denom());
        }
    }
    Ok(IntegralityReport { integral: witness.is_none(), exponent: Some(lambda), witness })
}

/// Floating-point Euclidean picture of a sphere: terminal output only.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatSphere {
    pub curvature: Rational,
    /// `None` for hyperplanes.
    pub center: Option<Vec<f64>>,
    pub radius: Option<f64>,
}

/// Maps ambient vectors of a cluster's orbit to Euclidean spheres. For
/// clusters without a rational realization the curvature stays exact and
/// the remaining coordinates come from a floating-point orthonormal frame.
#[derive(Clone, Debug)]
pub struct FloatRealizer {
    space: QuadraticSpace,
    fundamental: bool,
    curvature: ExactVector,
    axes: Vec<Vec<f64>>,
}

impl FloatRealizer {
    pub fn new(seed: &Cluster) -> Result<Self> {
        let space = seed.shape.space.clone();
        let dim = space.dim();
        if seed.is_fundamental() {
            return Ok(FloatRealizer { space, fundamental: true, curvature: ExactVector::unit(dim, 0), axes: Vec::new() });
        }
        if !seed.is_non_degenerate() || seed.kind() != FrameKind::Weights {
            return Err(Error::DegenerateCluster("realization needs a full weight frame".into()));
        }
        let k = seed.frame_curvatures().ok_or(Error::NoCurvature)?;
        // covector φ with φ(frame_j) = k_j, then its dual vector p = M^{-1} φ
        let u = RationalMatrix::from_columns(seed.frame())?;
        let phi = u.transpose().inverse()?.mul_vec(&ExactVector::new(k.to_vec()))?;
        let p = space.gram().inverse()?.mul_vec(&phi)?;
        // y: the most negative member, else any member of nonzero curvature
        let y_slot = (0..seed.rank())
            .filter(|&j| !k[j].is_zero())
            .min_by(|&a, &b| k[a].cmp(&k[b]))
            .ok_or(Error::NoCurvature)?;
        let y = &seed.frame()[y_slot];
        let py = &k[y_slot];
        let yy = space.norm(y)?;
        let q = y.scale(&py.recip()).add_scaled(&(-(yy / (rat(2) * py * py))), &p);
        let mut axes: Vec<Vec<f64>> = Vec::new();
        let g = space.gram().to_f64();
        let inner = |a: &[f64], b: &[f64]| -> f64 {
            let mut s = 0.0;
            for i in 0..a.len() {
                for j in 0..b.len() {
                    s += a[i] * g[i][j] * b[j];
                }
            }
            s
        };
        for j in 0..dim {
            if axes.len() == dim - 2 {
                break;
            }
            let e = ExactVector::unit(dim, j);
            let w = e.add_scaled(&(-space.inner(&e, &q)?), &p).add_scaled(&(-space.inner(&e, &p)?), &q);
            let mut wf = w.to_f64();
            for a in &axes {
                let c = inner(&wf, a);
                for (x, y) in wf.iter_mut().zip(a) {
                    *x -= c * y;
                }
            }
            let n2 = inner(&wf, &wf);
            if n2 > 1e-9 {
                let n = n2.sqrt();
                wf.iter_mut().for_each(|x| *x /= n);
                axes.push(wf);
            }
        }
        if axes.len() != dim - 2 {
            return Err(Error::DegenerateCluster("could not complete an orthonormal frame".into()));
        }
        let axes = axes
            .into_iter()
            .map(|a| {
                // store covectors a^T M so that coordinates are plain dot products
                (0..dim).map(|c| (0..dim).map(|r| a[r] * g[r][c]).sum()).collect()
            })
            .collect();
        Ok(FloatRealizer { space, fundamental: false, curvature: phi, axes })
    }

    pub fn realize(&self, v: &ExactVector) -> FloatSphere {
        let (k, coords): (Rational, Vec<f64>) = if self.fundamental {
            let n = v.len() - 2;
            (v[0].clone(), (1..=n).map(|i| to_f64(&v[i])).collect())
        } else {
            let vf = v.to_f64();
            let coords = self.axes.iter().map(|a| a.iter().zip(&vf).map(|(x, y)| x * y).sum()).collect();
            (self.curvature.dot(v), coords)
        };
        if k.is_zero() {
            return FloatSphere { curvature: k, center: None, radius: None };
        }
        let kf = to_f64(&k);
        FloatSphere {
            center: Some(coords.iter().map(|a| a / kf).collect()),
            radius: Some(1.0 / kf.abs()),
            curvature: k,
        }
    }

    pub fn space(&self) -> &QuadraticSpace {
        &self.space
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{build_polytope, catalog_polytope};
    use crate::exact::ratio;

    fn gasket_spheres() -> Vec<EuclideanSphere> {
        vec![
            EuclideanSphere::sphere(rat(-10), vec![rat(0), rat(0)]).unwrap(),
            EuclideanSphere::sphere(rat(18), vec![ratio(2, 45), rat(0)]).unwrap(),
            EuclideanSphere::sphere(rat(23), vec![ratio(-6, 115), ratio(1, 46)]).unwrap(),
            EuclideanSphere::sphere(rat(27), vec![ratio(-4, 135), ratio(-1, 18)]).unwrap(),
        ]
    }

    fn ks(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    fn gasket() -> (CoxeterPolytope, Cluster) {
        let p = catalog_polytope("apollonian2").unwrap();
        let c = seed_cluster_from_curvatures(&p, &ks(&[-10, 18, 23, 27]), Some(&gasket_spheres())).unwrap();
        (p, c)
    }

    #[test]
    fn apollonian_initial_cluster_is_tangent() {
        let p = catalog_polytope("apollonian2").unwrap();
        let c = initial_cluster(&p).unwrap();
        assert_eq!(c.members().len(), 4);
        let g = c.member_gram().unwrap();
        assert_eq!(g, RationalMatrix::circulant(&ks(&[1, -1, -1, -1])));
    }

    #[test]
    fn boyd_initial_cluster() {
        let p = catalog_polytope("boyd").unwrap();
        let c = initial_cluster(&p).unwrap();
        assert_eq!(c.member_gram().unwrap(), RationalMatrix::circulant(&ks(&[1, -1, -2, -1])));
    }

    #[test]
    fn rank11_has_single_member() {
        let p = catalog_polytope("rank11").unwrap();
        let c = initial_cluster(&p).unwrap();
        assert_eq!(c.members().len(), 1);
        assert!(!c.is_non_degenerate());
    }

    #[test]
    fn no_real_weights() {
        let p = catalog_polytope("ideal-triangle").unwrap();
        assert!(matches!(initial_cluster(&p), Err(Error::NoRealWeights)));
    }

    #[test]
    fn gasket_seed_is_valid() {
        let (_, c) = gasket();
        assert!(c.is_fundamental());
        assert_eq!(c.soddy_residual(), Some(rat(0)));
        assert_eq!(c.member_gram().unwrap(), *c.expected_gram());
    }

    #[test]
    fn soddy_violation_reports_residual() {
        let p = catalog_polytope("apollonian2").unwrap();
        match seed_cluster_from_curvatures(&p, &ks(&[1, 1, 1, 1]), None) {
            Err(Error::SoddyViolation { residual }) => assert_eq!(residual, rat(-8)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn band_seed() {
        let p = catalog_polytope("apollonian2").unwrap();
        let band = vec![
            EuclideanSphere::hyperplane(vec![rat(0), rat(1)], rat(-1)).unwrap(),
            EuclideanSphere::hyperplane(vec![rat(0), rat(-1)], rat(-1)).unwrap(),
            EuclideanSphere::sphere(rat(1), vec![rat(0), rat(0)]).unwrap(),
            EuclideanSphere::sphere(rat(1), vec![rat(2), rat(0)]).unwrap(),
        ];
        let c = seed_cluster_from_curvatures(&p, &ks(&[0, 0, 1, 1]), Some(&band)).unwrap();
        assert_eq!(c.soddy_residual(), Some(rat(0)));
        let err = enumerate_packing(&p, &c, &EnumerationOptions::bounded(rat(10))).unwrap_err();
        assert!(matches!(err, Error::UnboundedPacking));
    }

    #[test]
    fn gram_mismatch_names_pair() {
        let p = catalog_polytope("apollonian2").unwrap();
        let mut spheres = gasket_spheres();
        spheres[3] = EuclideanSphere::sphere(rat(27), vec![ratio(-4, 135), ratio(1, 18)]).unwrap();
        let err = seed_cluster_from_curvatures(&p, &ks(&[-10, 18, 23, 27]), Some(&spheres)).unwrap_err();
        assert!(matches!(err, Error::GramMismatch { i: 2, j: 3, .. }));
    }

    #[test]
    fn swap_matches_descartes() {
        let (_, c) = gasket();
        let d = apply_generator(&c, 0).unwrap();
        assert_eq!(d.curvatures().unwrap(), ks(&[146, 18, 23, 27]));
        assert_eq!(d.frame()[1..], c.frame()[1..]);
        assert_eq!(apply_generator(&d, 0).unwrap().frame(), c.frame());
        let layer: Vec<Rational> = (0..4).map(|i| apply_generator(&c, i).unwrap().curvatures().unwrap()[i].clone()).collect();
        assert_eq!(layer, ks(&[146, 62, 47, 35]));
    }

    #[test]
    fn member_reflection_keeps_descartes_one() {
        let p = catalog_polytope("ideal-triangle").unwrap();
        let c = member_cluster(&p, &ks(&[1, -2, -2])).unwrap();
        let d = reflect_in_member(&c, 1).unwrap();
        assert_eq!(d.curvatures().unwrap(), ks(&[-3, 2, -6]));
        assert_eq!(d.soddy_residual(), Some(rat(0)));
        assert_eq!(d.member_gram().unwrap(), *p.gram());
        assert!(member_cluster(&p, &ks(&[1, 1, 1])).is_err());
        let (_, w) = gasket();
        assert!(matches!(reflect_in_member(&w, 0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn first_counts_of_gasket() {
        let (p, c) = gasket();
        for (t, n) in [(30, 3), (35, 4), (50, 5)] {
            let orbit = enumerate_packing(&p, &c, &EnumerationOptions::bounded(rat(t))).unwrap();
            assert_eq!(orbit.count_at_most(&rat(t)), n, "T = {t}");
            assert!(!orbit.truncated);
            // the bounding circle is always reported
            assert!(orbit.spheres.iter().any(|s| s.curvature == Some(rat(-10))));
        }
    }

    #[test]
    fn threads_do_not_change_output() {
        let (p, c) = gasket();
        let base = enumerate_packing(&p, &c, &EnumerationOptions::bounded(rat(2000)).with_threads(1)).unwrap();
        for t in [2, 8] {
            let other = enumerate_packing(&p, &c, &EnumerationOptions::bounded(rat(2000)).with_threads(t)).unwrap();
            assert_eq!(base.spheres, other.spheres);
        }
    }

    #[test]
    fn enumerated_spheres_pack() {
        let (p, c) = gasket();
        let orbit = enumerate_packing(&p, &c, &EnumerationOptions::bounded(rat(400))).unwrap();
        let v = orbit.vectors();
        for i in 0..v.len() {
            for j in (i + 1)..v.len() {
                assert!(orbit.space.inner(v[i], v[j]).unwrap() <= rat(-1));
            }
        }
    }

    #[test]
    fn depth_limited_flags_truncation() {
        let (p, c) = gasket();
        let orbit = enumerate_packing(&p, &c, &EnumerationOptions::depth_limited(2, None)).unwrap();
        assert!(orbit.truncated);
        // seeds plus 4 + 12 new circles
        assert_eq!(orbit.len(), 4 + 4 + 12);
    }

    #[test]
    fn boyd_bounded_converges() {
        let p = catalog_polytope("boyd").unwrap();
        let c = seed_cluster_from_curvatures(&p, &ks(&[-1, 2, 4, 3]), None).unwrap();
        let orbit = enumerate_packing(&p, &c, &EnumerationOptions::bounded_checked(rat(60))).unwrap();
        assert!(!orbit.truncated);
        assert!(orbit.count_at_most(&rat(60)) > 10);
        for s in &orbit.spheres {
            assert!(is_integral(s.curvature.as_ref().unwrap()));
        }
    }

    #[test]
    fn non_packing_rejected() {
        let mut m = RationalMatrix::identity(6);
        for i in 0..6 {
            for j in 0..6 {
                if i != j {
                    m[(i, j)] = rat(-2);
                }
            }
        }
        let p = build_polytope(m).unwrap();
        let c = initial_cluster(&p).unwrap();
        let err = enumerate_packing(&p, &c, &EnumerationOptions::depth_limited(1, None)).unwrap_err();
        assert!(matches!(err, Error::NotPackingPolytope));
    }

    #[test]
    fn budget_checkpoint_resumes_to_same_set() {
        let (p, c) = gasket();
        let full = enumerate_packing(&p, &c, &EnumerationOptions::bounded(rat(3000))).unwrap();
        let mut opts = EnumerationOptions::bounded(rat(3000));
        opts.max_clusters = Some(50);
        let cp = match enumerate_packing(&p, &c, &opts) {
            Err(Error::BudgetExceeded { checkpoint, .. }) => *checkpoint,
            other => panic!("expected budget error, got {other:?}"),
        };
        let parsed = Checkpoint::from_text(&cp.to_text()).unwrap();
        assert_eq!(parsed, cp);
        opts.max_clusters = None;
        let resumed = resume_packing(&p, &c, &opts, Some(&parsed)).unwrap();
        assert_eq!(resumed.spheres, full.spheres);
    }

    #[test]
    fn checkpoint_rejects_bad_header() {
        assert!(matches!(Checkpoint::from_text("NOPE\n"), Err(Error::Checkpoint(_))));
    }

    #[test]
    fn apollonian_is_integral_with_exponent_one() {
        let (p, c) = gasket();
        let orbit = enumerate_packing(&p, &c, &EnumerationOptions::bounded(rat(500))).unwrap();
        let report = certify_integral(&orbit, 40).unwrap();
        assert!(report.integral);
        assert_eq!(report.exponent, Some(BigInt::one()));
    }

    #[test]
    fn half_integral_curvature_is_witnessed() {
        let p = catalog_polytope("apollonian2").unwrap();
        // the quadruple scaled by 2 about the origin: (-5, 9, 23/2, 27/2)
        let scaled: Vec<EuclideanSphere> = gasket_spheres()
            .into_iter()
            .map(|s| {
                let k = s.curvature() / rat(2);
                let c = s.center().unwrap().iter().map(|x| x * rat(2)).collect();
                EuclideanSphere::sphere(k, c).unwrap()
            })
            .collect();
        let k: Vec<Rational> = scaled.iter().map(EuclideanSphere::curvature).collect();
        let c = seed_cluster_from_curvatures(&p, &k, Some(&scaled)).unwrap();
        let orbit = enumerate_packing(&p, &c, &EnumerationOptions::depth_limited(0, None)).unwrap();
        let report = certify_integral(&orbit, 4).unwrap();
        assert!(!report.integral);
        let w = report.witness.unwrap();
        assert!(w == ratio(23, 2) || w == ratio(27, 2));
    }

    #[test]
    fn float_realizer_matches_exact_geometry() {
        let p = catalog_polytope("apollonian2").unwrap();
        let c = seed_cluster_from_curvatures(&p, &ks(&[-10, 18, 23, 27]), None).unwrap();
        let r = FloatRealizer::new(&c).unwrap();
        let spheres: Vec<FloatSphere> = c.members().into_iter().map(|v| r.realize(v)).collect();
        assert_eq!(spheres[0].curvature, rat(-10));
        let c0 = spheres[0].center.as_ref().unwrap();
        assert!(c0[0].abs() < 1e-12 && c0[1].abs() < 1e-12);
        // positive circles are internally tangent to the bounding circle and to each other
        for i in 1..4 {
            let ci = spheres[i].center.as_ref().unwrap();
            let ri = spheres[i].radius.unwrap();
            let d0 = (ci[0].powi(2) + ci[1].powi(2)).sqrt();
            assert!((d0 - (0.1 - ri)).abs() < 1e-12);
            for sj in &spheres[i + 1..4] {
                let cj = sj.center.as_ref().unwrap();
                let d = ((ci[0] - cj[0]).powi(2) + (ci[1] - cj[1]).powi(2)).sqrt();
                assert!((d - (ri + sj.radius.unwrap())).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cluster_orbit_respects_limits() {
        let (_, c) = gasket();
        let orbit = cluster_orbit(&c, 3, usize::MAX).unwrap();
        assert_eq!(orbit.len(), 1 + 4 + 12 + 36);
        assert_eq!(cluster_orbit(&c, 10, 100).unwrap().len(), 100);
    }
}
