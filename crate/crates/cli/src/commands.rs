use std::collections::hash_map::DefaultHasher;
use std::fmt::Write as _;
use std::hash::{Hash, Hasher};
use std::path::{Path, PathBuf};

use packlab::coxeter::{
    apollonian_gram, build_polytope, catalog_polytope, dual_polytope, is_packing_polytope, maxwell_level,
    CoxeterPolytope,
};
use packlab::exact::{from_f64, to_f64};
use packlab::exponent::{counting_function, default_grid, fit_exponent, CountCurve, ExponentEstimate};
use packlab::inversive::{auto_viewport, render_svg, sphere_from_vector, EuclideanSphere, SphereVector, SvgOptions, Viewport};
use packlab::lattice::{
    catalog_lattice, discriminant_group, dual_gram, even_sublattice, gram_in_basis, rescale, IntegralLattice,
};
use packlab::orbit::{
    initial_cluster, resume_packing, seed_cluster_from_curvatures, Checkpoint, Cluster, EnumerationOptions,
    FloatRealizer, PackingOrbit, Region,
};
use packlab::surface::{builtin_model, orbit_count, triangle_model, verify_model, SurfaceModel};
use packlab::{rat, Error, Rational};
use serde_json::json;

use crate::config::{self, PolytopeFile};
use crate::{CliError, EnumerationArgs, FitArgs, LatticeArgs, PackArgs, RenderArgs, SourceArgs, SurfaceArgs};

const CHECKPOINT_ENV: &str = "PACKLAB_CHECKPOINT_DIR";

struct Source {
    polytope: CoxeterPolytope,
    seed: Cluster,
    apollonian: bool,
}

fn load_polytope(args: &SourceArgs) -> Result<(CoxeterPolytope, Option<PolytopeFile>), CliError> {
    match (&args.catalog, &args.gram_file) {
        (Some(name), None) => Ok((catalog_polytope(name)?, None)),
        (None, Some(path)) => {
            let file: PolytopeFile = config::read_json(path)?;
            let gram = config::matrix("gram", &file.gram)?;
            let p = build_polytope(gram).map_err(|e| match e {
                Error::NotSymmetric | Error::NonUnitDiagonal { .. } | Error::NotSquare { .. } => {
                    CliError::Config(format!("field gram: {e}"))
                }
                other => other.into(),
            })?;
            Ok((p, Some(file)))
        }
        _ => Err(CliError::Config("give exactly one of --catalog or --gram-file".into())),
    }
}

fn load_source(args: &SourceArgs) -> Result<Source, CliError> {
    let (polytope, file) = load_polytope(args)?;
    let seed_k = match (&args.seed, file.as_ref().and_then(|f| f.seed.as_ref())) {
        (Some(flag), _) => Some(config::list("--seed", flag)?),
        (None, Some(items)) => Some(config::vector("seed", items)?.0),
        (None, None) => None,
    };
    let spheres = match file.as_ref().and_then(|f| f.spheres.as_ref()) {
        Some(entries) => Some(config::spheres(entries)?),
        None => None,
    };
    let seed = match seed_k {
        Some(k) => seed_cluster_from_curvatures(&polytope, &k, spheres.as_deref())?,
        None if args.catalog.is_some() => initial_cluster(&polytope)?,
        None => return Err(CliError::Config("a seed is required for a polytope read from a file: give `seed` or --seed".into())),
    };
    let n = polytope.rank().saturating_sub(2);
    let apollonian = n >= 2 && apollonian_gram(n).is_ok_and(|g| &g == polytope.gram());
    Ok(Source { polytope, seed, apollonian })
}

fn positive(flag: &str, text: &str) -> Result<Rational, CliError> {
    let q = config::rational(flag, text)?;
    if q <= rat(0) {
        return Err(CliError::Config(format!("{flag} must be positive, got {text}")));
    }
    Ok(q)
}

fn options(args: &EnumerationArgs, apollonian: bool, threads: Option<usize>) -> Result<EnumerationOptions, CliError> {
    let bound = args.bound.as_deref().map(|t| positive("--T", t)).transpose()?;
    let mut opts = match (args.depth, bound) {
        (Some(d), b) => EnumerationOptions::depth_limited(d, b),
        (None, Some(t)) if apollonian => EnumerationOptions::bounded(t),
        (None, Some(t)) => EnumerationOptions::bounded_checked(t),
        (None, None) => return Err(CliError::Config("give a curvature bound --T or a word length --depth".into())),
    };
    if let Some(s) = &args.slack {
        opts.slack = positive("--slack", s)?;
    }
    opts.convergence_check |= args.check;
    if let (Some(lo), Some(hi)) = (&args.region_min, &args.region_max) {
        opts.region = Some(Region::new(config::list("--region-min", lo)?, config::list("--region-max", hi)?)?);
    }
    opts.max_clusters = args.max_clusters;
    opts.threads = threads;
    Ok(opts)
}

fn checkpoint_path(source: &SourceArgs, args: &EnumerationArgs) -> Option<PathBuf> {
    let dir = std::env::var_os(CHECKPOINT_ENV)?;
    let mut h = DefaultHasher::new();
    format!(
        "{:?}|{:?}|{:?}|{:?}|{:?}|{:?}|{:?}|{:?}|{}",
        source.catalog, source.gram_file, source.seed, args.bound, args.depth, args.slack, args.region_min, args.region_max, args.check
    )
    .hash(&mut h);
    Some(PathBuf::from(dir).join(format!("pack-{:016x}.ckpt", h.finish())))
}

fn enumerate(source: &SourceArgs, args: &EnumerationArgs, threads: Option<usize>) -> Result<(Source, PackingOrbit), CliError> {
    let src = load_source(source)?;
    let opts = options(args, src.apollonian, threads)?;
    let path = checkpoint_path(source, args).filter(|_| opts.max_clusters.is_some());
    let resume = match &path {
        Some(p) if p.exists() => Some(Checkpoint::read_from(p)?),
        _ => None,
    };
    match resume_packing(&src.polytope, &src.seed, &opts, resume.as_ref()) {
        Ok(orbit) => {
            if let Some(p) = path.filter(|p| p.exists()) {
                let _ = std::fs::remove_file(p);
            }
            Ok((src, orbit))
        }
        Err(Error::BudgetExceeded { limit, checkpoint }) => match path {
            Some(p) => {
                checkpoint.write_to(&p)?;
                Err(CliError::Truncated(format!(
                    "cluster budget {limit} exhausted at depth {}; rerun to resume from {}",
                    checkpoint.depth,
                    p.display()
                )))
            }
            None => Err(CliError::Truncated(format!(
                "cluster budget {limit} exhausted at depth {}; set {CHECKPOINT_ENV} to resume",
                checkpoint.depth
            ))),
        },
        Err(e) => Err(e.into()),
    }
}

/// Spheres for drawing: exact when the orbit lives in the fundamental form,
/// otherwise rounded from the floating-point realization.
fn drawable(seed: &Cluster, orbit: &PackingOrbit) -> Result<Vec<EuclideanSphere>, CliError> {
    if let Some(s) = orbit.euclidean_spheres() {
        return Ok(s);
    }
    let realizer = FloatRealizer::new(seed)?;
    orbit
        .spheres
        .iter()
        .filter_map(|s| {
            let f = realizer.realize(&s.vector);
            let center = f.center?;
            let center: Option<Vec<Rational>> = center.iter().map(|&x| from_f64(x)).collect();
            Some(center.ok_or_else(|| CliError::Math(Error::Unsupported("non-finite center".into()))).and_then(|c| {
                Ok(EuclideanSphere::sphere(f.curvature, c)?)
            }))
        })
        .collect()
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Config(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn spheres_csv(seed: &Cluster, orbit: &PackingOrbit) -> Result<String, CliError> {
    let n = orbit.space.dim() - 2;
    let mut out = String::from("curvature");
    for i in 1..=n {
        let _ = write!(out, ",x{i}");
    }
    out.push_str(",radius\n");
    let empty = ",".repeat(n + 1);
    if orbit.fundamental {
        for s in &orbit.spheres {
            let sphere = sphere_from_vector(&SphereVector::new(s.vector.clone())?);
            let _ = write!(out, "{}", sphere.curvature());
            match (sphere.center(), sphere.radius()) {
                (Some(c), Some(r)) => {
                    for x in c {
                        let _ = write!(out, ",{x}");
                    }
                    let _ = writeln!(out, ",{r}");
                }
                _ => {
                    let _ = writeln!(out, "{empty}");
                }
            }
        }
        return Ok(out);
    }
    let realizer = FloatRealizer::new(seed).ok();
    for s in &orbit.spheres {
        let k = s.curvature.as_ref().map_or_else(|| "-".to_string(), |k| k.to_string());
        let f = realizer.as_ref().map(|r| r.realize(&s.vector));
        match f.and_then(|f| Some((f.center?, f.radius?))) {
            Some((c, r)) => {
                let _ = write!(out, "{k}");
                for x in c {
                    let _ = write!(out, ",{x}");
                }
                let _ = writeln!(out, ",{r}");
            }
            None => {
                let _ = writeln!(out, "{k}{empty}");
            }
        }
    }
    Ok(out)
}

pub fn pack(args: &PackArgs, threads: Option<usize>) -> Result<(), CliError> {
    let (src, orbit) = enumerate(&args.source, &args.enumeration, threads)?;
    write_output(args.out.as_deref(), &spheres_csv(&src.seed, &orbit)?)?;
    if let Some(path) = &args.counts {
        let k = orbit.positive_curvatures();
        let top = orbit
            .curvature_bound
            .as_ref()
            .map(to_f64)
            .or_else(|| k.last().map(to_f64))
            .ok_or(CliError::Math(Error::NoCurvature))?;
        let lo = k.first().map(to_f64).unwrap_or(top).min(top);
        let mut curve = counting_function(&k, &default_grid(lo, top))?.with_source("pack");
        if orbit.truncated {
            curve = curve.with_truncation(None);
        }
        write_output(Some(path), &curve.to_csv())?;
    }
    if let Some(path) = &args.svg {
        let svg = render_svg(&drawable(&src.seed, &orbit)?, None, SvgOptions::default())?;
        write_output(Some(path), &svg)?;
    }
    eprintln!(
        "{} spheres from {} clusters, depth {}{}",
        orbit.len(),
        orbit.clusters_visited,
        orbit.depth_reached,
        if orbit.truncated { ", truncated" } else { "" }
    );
    Ok(())
}

pub fn render(args: &RenderArgs, threads: Option<usize>) -> Result<(), CliError> {
    let (src, orbit) = enumerate(&args.source, &args.enumeration, threads)?;
    let spheres = drawable(&src.seed, &orbit)?;
    let viewport = match &args.viewport {
        Some(text) => {
            let v: Vec<f64> = config::list("--viewport", text)?.iter().map(to_f64).collect();
            if v.len() != 4 || v[0] >= v[2] || v[1] >= v[3] {
                return Err(CliError::Config("--viewport needs min_x,min_y,max_x,max_y with min < max".into()));
            }
            Viewport { min_x: v[0], min_y: v[1], max_x: v[2], max_y: v[3] }
        }
        None => auto_viewport(&spheres),
    };
    let svg = render_svg(&spheres, Some(viewport), SvgOptions { labels: args.labels, pixels: args.pixels })?;
    write_output(Some(&args.out), &svg)
}

fn estimate_json(e: &ExponentEstimate) -> serde_json::Value {
    json!({
        "delta_hat": e.delta_hat,
        "stderr": e.stderr,
        "r_squared": e.r_squared,
        "window": [e.window.0, e.window.1],
        "points_used": e.points_used,
        "constant": e.constant,
        "method": format!("{:?}", e.method),
    })
}

pub fn fit(args: &FitArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.counts)
        .map_err(|e| CliError::Config(format!("{}: {e}", args.counts.display())))?;
    let curve = CountCurve::from_csv(&text)?;
    let estimate = fit_exponent(&curve, args.decades)?;
    println!("{estimate}");
    println!("{}", estimate_json(&estimate));
    Ok(())
}

pub fn lattice(args: &LatticeArgs) -> Result<(), CliError> {
    let mut l = match (&args.name, &args.gram) {
        (Some(name), None) => catalog_lattice(name)?,
        (None, Some(g)) => IntegralLattice::new(config::inline_matrix("--gram", g)?, "custom")?,
        _ => return Err(CliError::Config("give exactly one of --name or --gram".into())),
    };
    if let Some(t) = &args.scale {
        l = rescale(&l, &config::rational("--scale", t)?)?;
    }
    let all = !(args.discriminant || args.even || args.dual || args.basis.is_some());
    println!("lattice {} of rank {}", l.label(), l.rank());
    println!("gram:\n{}", l.gram());
    println!("determinant: {}", l.determinant());
    if all || args.discriminant {
        let d = discriminant_group(&l)?;
        let factors: Vec<String> = d.invariant_factors.iter().map(ToString::to_string).collect();
        println!("discriminant group: {d}");
        println!("invariant factors: {}", if factors.is_empty() { "none".into() } else { factors.join(",") });
    }
    if all || args.even {
        println!("even sublattice gram:\n{}", even_sublattice(&l)?.gram());
    }
    if all || args.dual {
        println!("dual gram:\n{}", dual_gram(&l)?);
    }
    if let Some(b) = &args.basis {
        let basis = config::inline_matrix("--basis", b)?;
        println!("gram in basis:\n{}", gram_in_basis(&l, &basis, args.sublattice)?);
    }
    Ok(())
}

fn load_model(args: &SurfaceArgs) -> Result<SurfaceModel, CliError> {
    let mut m = match (&args.model, &args.model_file) {
        (Some(name), None) if name == "triangle" => {
            let get = |flag: &str, v: &Option<String>| {
                v.as_deref()
                    .ok_or_else(|| CliError::Config(format!("the triangle model needs {flag}")))
                    .and_then(|t| config::rational(flag, t))
            };
            triangle_model(&get("--a", &args.a)?, &get("--b", &args.b)?, &get("--c", &args.c)?)?
        }
        (Some(name), None) => builtin_model(name)?,
        (None, Some(path)) => config::model(&config::read_json(path)?)?,
        _ => return Err(CliError::Config("give exactly one of --model or --model-file".into())),
    };
    if let Some(h) = &args.h {
        m = m.with_h(packlab::ExactVector::new(config::list("--h", h)?))?;
    }
    if let Some(c) = &args.class {
        m = m.with_c(packlab::ExactVector::new(config::list("--class", c)?))?;
    }
    Ok(m)
}

pub fn surface(args: &SurfaceArgs, threads: Option<usize>) -> Result<(), CliError> {
    let m = load_model(args)?;
    let verify = args.verify || !(args.count || args.fit);
    if verify {
        let report = verify_model(&m)?;
        println!("{report}");
        if !report.passed() {
            return Err(CliError::Math(Error::UnverifiedModel(m.name.clone())));
        }
    }
    if !(args.count || args.fit) {
        return Ok(());
    }
    let t = positive("--T", &args.bound)?;
    let slack = positive("--slack", &args.slack)?;
    let count = orbit_count(&m, &m.c, &t, &slack, threads)?;
    let top = to_f64(&t);
    let lo = count.heights.first().map(to_f64).unwrap_or(top).min(top);
    let curve = count.curve(&default_grid(lo, top))?.with_source(format!("surface {}", m.name));
    eprintln!(
        "{} orbit points with height <= {t} ({} explored){}",
        count.count(),
        count.explored,
        if count.truncated { ", truncated" } else { "" }
    );
    if args.count {
        write_output(args.out.as_deref(), &curve.to_csv())?;
    }
    if args.fit {
        if count.finite {
            return Err(CliError::Math(Error::FiniteOrbit(count.explored)));
        }
        let estimate = fit_exponent(&curve, 2.0)?;
        println!("{estimate}");
        println!("{}", estimate_json(&estimate));
    }
    Ok(())
}

pub fn dual(args: &SourceArgs) -> Result<(), CliError> {
    let (p, _) = load_polytope(args)?;
    let d = dual_polytope(&p)?;
    println!("dual gram:\n{}", d.gram());
    println!("maxwell level: {}", maxwell_level(d.gram())?);
    println!("packing polytope: {}", is_packing_polytope(&d));
    Ok(())
}
