use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use nilorbit::corpus::{catalogue, recipe, recipe_names};
use nilorbit::estimates::{
    certify_separation, estimate_epsilon, find_accumulation, find_eps2, perturbation_bound_check,
    poly_bound_harness, triangular_check, AccumulationParams, EstimateError, LowerTriangular,
    Perturbation, PolyBoundParams, SectionModel, SeparationParams, StripGrid, StripRegion,
};
use nilorbit::format::{
    format_vector, orbit_value, parse_orbit, parse_target, serialize_orbit, to_value,
};
use nilorbit::hodge::{
    build_limit_mhs, check_kernel_injectivity, construct_alpha, is_r_split,
    monodromy_weight_filtration, primitive_decomposition, validate_orbit, BiGradedSpace,
    GradedSpace, HodgeError, NilpotentOrbit,
};
use nilorbit::linalg::{GScalar, GVector, Matrix};
use nilorbit::report::{digest, ReportFile};

#[derive(Parser)]
#[command(
    name = "nilorbit",
    version,
    about = "Nilpotent orbits, limit mixed Hodge structures and lattice-section estimates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Input {
    /// Orbit file (JSON).
    #[arg(long, conflicts_with = "example")]
    orbit: Option<PathBuf>,
    /// Built-in example name.
    #[arg(long)]
    example: Option<String>,
}

#[derive(Args, Clone)]
struct Output {
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Canonical JSON report (the default).
    #[arg(long, conflicts_with = "text")]
    json: bool,
    /// One `path = value` line per report field.
    #[arg(long)]
    text: bool,
}

#[derive(Args, Clone)]
struct Grid {
    /// Lower edge of the strip, `Im z > r`.
    #[arg(long, default_value_t = 2.0)]
    r: f64,
    /// Defaults to r 2^(grid-y - 1).
    #[arg(long = "y-max")]
    y_max: Option<f64>,
    /// Sample points per unit of `Re z`.
    #[arg(long = "grid-re", default_value_t = 8)]
    grid_re: usize,
    /// Geometric `Im z` levels.
    #[arg(long = "grid-y", default_value_t = 12)]
    grid_y: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Structural checks on an orbit.
    Validate {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Weight filtration and Hodge decomposition of the graded pieces.
    LimitMhs {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Primitive decomposition and the negative Hodge part.
    Bigrading {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Hodge and rational splittings and their discrepancy.
    Alpha {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Empirical constant of the norm estimate.
    EstimateEpsilon {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        grid: Grid,
        /// Lattice coefficients range over `[-bound, bound]`.
        #[arg(long, default_value_t = 20)]
        bound: i64,
        /// Fiber target, e.g. `(0, 1/2+1/4i)`; defaults to 0.
        #[arg(long)]
        target: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Search for lattice sections accumulating at a fiber point.
    FindAccumulation {
        #[command(flatten)]
        input: Input,
        /// Fiber point, e.g. `(1, 1/2+1/4i)`.
        #[arg(long)]
        target: String,
        /// Distance below which a section counts as a witness.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 20)]
        bound: i64,
        #[arg(long, default_value_t = 1.125)]
        r: f64,
        #[arg(long = "y-max", default_value_t = 1e6)]
        y_max: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Certify that no lattice section comes near a fiber point.
    CertifySeparation {
        #[command(flatten)]
        input: Input,
        /// Center of the ball, as for find-accumulation.
        #[arg(long, alias = "point")]
        target: String,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 50)]
        bound: i64,
        #[arg(long, default_value_t = 2.0)]
        r: f64,
        #[arg(long = "y-max", default_value_t = 1e6)]
        y_max: f64,
        /// Empirical epsilon for the heuristic tail exclusion.
        #[arg(long)]
        epsilon: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Fit the constant bounding a holomorphic perturbation of the sections.
    Perturbation {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        grid: Grid,
        #[arg(long, default_value_t = 10)]
        bound: i64,
        /// M(t) = scale · t · identity block.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Randomized search for violations of the polynomial norm bound.
    #[command(alias = "lemma25")]
    PolyBound {
        /// Degree bound of the polynomials.
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Number of smallness conditions on `f` and on its conjugate.
        #[arg(long, default_value_t = 1)]
        n1: usize,
        #[arg(long, default_value_t = 1)]
        n2: usize,
        #[arg(long, default_value = "1")]
        a: String,
        #[arg(long = "a-prime", default_value = "1")]
        a_prime: String,
        #[arg(long, default_value_t = 1.0 / 64.0)]
        eps: f64,
        #[arg(long, default_value_t = 2.0)]
        r: f64,
        #[arg(long = "y-max", default_value_t = 512.0)]
        y_max: f64,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long = "coeff-box", default_value_t = 4.0)]
        coeff_box: f64,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Whether the triangular inequality system forces zero.
    #[command(alias = "sublemma")]
    TriangularSystem {
        /// Rows of the strictly lower triangular part, e.g. `[[],[1.0]]`.
        #[arg(long)]
        cmat: String,
        /// Without it, the largest passing dyadic value below 1/2 is searched.
        #[arg(long)]
        eps2: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Print a built-in orbit as an orbit file, or list the names.
    Example {
        name: Option<String>,
        #[arg(long)]
        list: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Operational failure: exit code 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<(ReportFile, bool), UsageError>;

struct Loaded {
    orbit: NilpotentOrbit,
    digest: String,
    source: String,
}

fn load(input: &Input) -> Result<Loaded, UsageError> {
    let (orbit, source) = match (&input.orbit, &input.example) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
            let orbit =
                parse_orbit(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
            (orbit, path.display().to_string())
        }
        (None, Some(name)) => (recipe(name)?, format!("example {name}")),
        _ => {
            return Err(UsageError(format!(
                "give --orbit FILE or --example NAME (one of {})",
                recipe_names().join(", ")
            )))
        }
    };
    let digest = digest(serialize_orbit(&orbit).as_bytes());
    Ok(Loaded {
        orbit,
        digest,
        source,
    })
}

fn report(
    command: &str,
    loaded: &Loaded,
    parameters: Value,
    results: Value,
    verdict: &str,
) -> ReportFile {
    let mut parameters = parameters;
    parameters["input"] = json!(loaded.source);
    parameters["label"] = json!(loaded.orbit.label());
    ReportFile {
        command: command.into(),
        input_digest: loaded.digest.clone(),
        parameters,
        results,
        seed: None,
        grid: None,
        bounds: None,
        verdict: verdict.into(),
    }
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array(
        m.row_vectors()
            .iter()
            .map(|r| Value::Array(r.iter().map(|s| json!(s.to_string())).collect()))
            .collect(),
    )
}

fn vector_json(v: &GVector) -> Value {
    Value::Array(v.iter().map(|s| json!(s.to_string())).collect())
}

fn target(model: &SectionModel, text: Option<&str>) -> Result<GVector, UsageError> {
    match text {
        Some(t) => {
            let v = parse_target(t).map_err(|e| UsageError(format!("bad target: {e}")))?;
            if v.dim() != model.fiber_dim() {
                return Err(UsageError(format!(
                    "target has {} coordinates, the fiber has {}",
                    v.dim(),
                    model.fiber_dim()
                )));
            }
            Ok(v)
        }
        None => Ok(GVector::zeros(model.fiber_dim())),
    }
}

/// Negative verdicts from estimate refusals; parameter errors are usage errors.
fn refusal(command: &str, loaded: &Loaded, parameters: Value, e: EstimateError) -> CmdResult {
    match e {
        EstimateError::InvalidParameter(_) | EstimateError::TargetDimension { .. } => {
            Err(UsageError(e.to_string()))
        }
        other => Ok((
            report(
                command,
                loaded,
                parameters,
                json!({"refusal": other.to_string()}),
                "refused",
            ),
            false,
        )),
    }
}

fn strip_grid(g: &Grid) -> Result<StripGrid, UsageError> {
    let grid = match g.y_max {
        Some(y) => StripGrid::new(StripRegion::new(g.r, y)?, g.grid_re, g.grid_y)?,
        None => StripGrid::dyadic(g.r, g.grid_re, g.grid_y)?,
    };
    Ok(grid)
}

fn grid_json(g: &StripGrid) -> Value {
    json!({"r": g.region.r, "y_max": g.region.y_max, "re_steps": g.re_steps, "y_levels": g.y_levels})
}

fn validate(input: &Input) -> CmdResult {
    let loaded = load(input)?;
    let v = validate_orbit(&loaded.orbit);
    let ok = v.all_pass();
    let results = json!({
        "checks": to_value(&v.checks),
        "kernel_injective": check_kernel_injectivity(&loaded.orbit),
        "orbit": orbit_value(&loaded.orbit),
    });
    Ok((
        report(
            "validate",
            &loaded,
            json!({}),
            results,
            if ok { "pass" } else { "fail" },
        ),
        ok,
    ))
}

fn weight_json(orbit: &NilpotentOrbit) -> Result<Value, HodgeError> {
    let w = monodromy_weight_filtration(orbit.n(), orbit.weight())?;
    let levels: serde_json::Map<String, Value> = w
        .weights()
        .map(|k| {
            (
                k.to_string(),
                json!({"dim": w.get(k).dim(), "graded_dim": w.graded_dim(k)}),
            )
        })
        .collect();
    Ok(json!({"center": w.center(), "depth": w.depth(), "levels": levels}))
}

fn limit_mhs(input: &Input) -> CmdResult {
    let loaded = load(input)?;
    let orbit = &loaded.orbit;
    let weight = match weight_json(orbit) {
        Ok(w) => w,
        Err(e) => {
            let r = report(
                "limit-mhs",
                &loaded,
                json!({}),
                json!({"refusal": e.to_string()}),
                "refused",
            );
            return Ok((r, false));
        }
    };
    match build_limit_mhs(orbit) {
        Ok(mhs) => {
            let numbers: Vec<Value> = mhs
                .hodge_numbers()
                .iter()
                .map(|(&(p, q), &d)| json!({"p": p, "q": q, "dim": d}))
                .collect();
            let results = json!({
                "weight_filtration": weight,
                "hodge_numbers": numbers,
                "r_split": is_r_split(&mhs)?,
                "kernel_injective": check_kernel_injectivity(orbit),
            });
            Ok((
                report("limit-mhs", &loaded, json!({}), results, "pure"),
                true,
            ))
        }
        Err(HodgeError::NotPure(d)) => {
            let results = json!({
                "weight_filtration": weight,
                "diagnosis": to_value(&d),
                "message": d.to_string(),
            });
            Ok((
                report("limit-mhs", &loaded, json!({}), results, "not_pure"),
                false,
            ))
        }
        Err(e) => Ok((
            report(
                "limit-mhs",
                &loaded,
                json!({}),
                json!({"refusal": e.to_string()}),
                "refused",
            ),
            false,
        )),
    }
}

fn pieces_json(bi: &BiGradedSpace) -> Value {
    Value::Array(
        bi.pieces()
            .iter()
            .map(|(&(j, k), s)| json!({"j": j, "k": k, "dim": s.dim()}))
            .collect(),
    )
}

fn bigrading(input: &Input) -> CmdResult {
    let loaded = load(input)?;
    let orbit = &loaded.orbit;
    let hodge = build_limit_mhs(orbit).and_then(|m| primitive_decomposition(&m));
    match hodge {
        Ok(bi) => {
            let h = bi.hodge().expect("Hodge bigrading");
            let basis: Vec<Value> = h
                .basis
                .iter()
                .map(|b| {
                    let (p, q) = b.hodge_type.expect("typed basis");
                    json!({"j": b.j, "k": b.k, "s": b.s, "p": p, "q": q, "vector": vector_json(&b.vector)})
                })
                .collect();
            let results = json!({
                "depth": bi.depth(),
                "pieces": pieces_json(&bi),
                "hodge_basis": basis,
                "negative_part_dim": h.negative_part.dim(),
                "negative_indices": h.negative_indices(),
            });
            Ok((
                report("bigrading", &loaded, json!({}), results, "hodge"),
                true,
            ))
        }
        Err(e) => {
            // fall back to the bigrading from N and W alone
            let rational = monodromy_weight_filtration(orbit.n(), orbit.weight())
                .and_then(|w| GradedSpace::new(orbit.n(), w))
                .and_then(|g| BiGradedSpace::rational(&g));
            let results = match rational {
                Ok(bi) => json!({
                    "depth": bi.depth(),
                    "pieces": pieces_json(&bi),
                    "refusal": e.to_string(),
                }),
                Err(e2) => json!({"refusal": e.to_string(), "rational_refusal": e2.to_string()}),
            };
            Ok((
                report("bigrading", &loaded, json!({}), results, "rational_only"),
                false,
            ))
        }
    }
}

fn alpha(input: &Input) -> CmdResult {
    let loaded = load(input)?;
    let built = build_limit_mhs(&loaded.orbit).and_then(|mhs| {
        let bi = primitive_decomposition(&mhs)?;
        let iota = construct_alpha(&mhs, &bi)?;
        Ok(iota)
    });
    match built {
        Ok(iota) => {
            let components: Vec<Value> = iota
                .components
                .iter()
                .map(|(&(i, j, k), m)| json!({"i": i, "j": j, "k": k, "block": matrix_json(m)}))
                .collect();
            let preserved = iota.preserves_kernel_filtration();
            let results = json!({
                "alpha_c": matrix_json(&iota.alpha_c),
                "alpha_q": matrix_json(&iota.alpha_q),
                "iota": matrix_json(&iota.iota),
                "components": components,
                "lattice_index": iota.lattice_index.to_string(),
                "is_identity": iota.is_identity(),
                "preserves_kernel_filtration": preserved,
            });
            let verdict = if preserved {
                "kernel_filtration_preserved"
            } else {
                "kernel_filtration_violated"
            };
            Ok((
                report("alpha", &loaded, json!({}), results, verdict),
                preserved,
            ))
        }
        Err(e) => Ok((
            report(
                "alpha",
                &loaded,
                json!({}),
                json!({"refusal": e.to_string()}),
                "refused",
            ),
            false,
        )),
    }
}

fn model_for(loaded: &Loaded) -> Result<SectionModel, EstimateError> {
    SectionModel::for_orbit(&loaded.orbit)
}

fn estimate(input: &Input, g: &Grid, bound: i64, target_text: Option<&str>) -> CmdResult {
    let loaded = load(input)?;
    let grid = strip_grid(g)?;
    let mut params = json!({"bound": bound, "target": target_text.unwrap_or("0")});
    let model = match model_for(&loaded) {
        Ok(m) => m,
        Err(e) => return refusal("estimate-epsilon", &loaded, params, e),
    };
    let v = target(&model, target_text)?;
    params["target"] = json!(format_vector(&v));
    let mut rep = match estimate_epsilon(&model, &v, bound, &grid) {
        Ok(r) => {
            let ok = r.epsilon > 0.0 && r.violations == 0;
            let verdict = if ok { "positive" } else { "not_positive" };
            (
                report("estimate-epsilon", &loaded, params, to_value(&r), verdict),
                ok,
            )
        }
        Err(e) => refusal("estimate-epsilon", &loaded, params, e)?,
    };
    rep.0.grid = Some(grid_json(&grid));
    rep.0.bounds = Some(json!({"coefficients": bound}));
    Ok(rep)
}

fn accumulation(
    input: &Input,
    target_text: &str,
    tol: f64,
    bound: i64,
    r: f64,
    y_max: f64,
) -> CmdResult {
    let loaded = load(input)?;
    let region = StripRegion::new(r, y_max)?;
    let params = json!({"target": target_text, "tol": tol, "bound": bound, "r": r, "y_max": y_max});
    let model = match model_for(&loaded) {
        Ok(m) => m,
        Err(e) => return refusal("find-accumulation", &loaded, params, e),
    };
    let v = target(&model, Some(target_text))?;
    let p = AccumulationParams { tol, bound, region };
    let mut rep = match find_accumulation(&model, &v, &p) {
        Ok(w) => {
            let found = w.is_some();
            let results = json!({
                "mode": to_value(&model.mode()),
                "target_in_invariant_part": model.invariant_part().contains(&v),
                "witness": to_value(&w),
            });
            let verdict = if found { "witness_found" } else { "no_witness" };
            (
                report("find-accumulation", &loaded, params, results, verdict),
                found,
            )
        }
        Err(e) => refusal("find-accumulation", &loaded, params, e)?,
    };
    rep.0.bounds = Some(json!({"coefficients": bound, "y_max": y_max}));
    Ok(rep)
}

#[allow(clippy::too_many_arguments)]
fn separation(
    input: &Input,
    target_text: &str,
    radius: f64,
    bound: i64,
    r: f64,
    y_max: f64,
    epsilon: Option<f64>,
) -> CmdResult {
    let loaded = load(input)?;
    let region = StripRegion::new(r, y_max)?;
    let params = json!({"target": target_text, "radius": radius, "bound": bound, "r": r, "y_max": y_max, "epsilon": epsilon});
    let model = match model_for(&loaded) {
        Ok(m) => m,
        Err(e) => return refusal("certify-separation", &loaded, params, e),
    };
    let v = target(&model, Some(target_text))?;
    let p = SeparationParams {
        radius,
        bound,
        region,
        epsilon,
    };
    let mut rep = match certify_separation(&model, &v, &p) {
        Ok(s) => {
            let ok = s.certified;
            let mut results = to_value(&s);
            results["mode"] = to_value(&model.mode());
            let verdict = if ok { "certified" } else { "not_certified" };
            (
                report("certify-separation", &loaded, params, results, verdict),
                ok,
            )
        }
        Err(e) => refusal("certify-separation", &loaded, params, e)?,
    };
    rep.0.bounds = Some(json!({"coefficients": bound, "y_max": y_max}));
    Ok(rep)
}

fn perturbation(input: &Input, g: &Grid, bound: i64, scale: f64) -> CmdResult {
    let loaded = load(input)?;
    let grid = strip_grid(g)?;
    let params =
        json!({"bound": bound, "scale": scale, "perturbation": "scale * t * identity block"});
    let model = match model_for(&loaded) {
        Ok(m) => m,
        Err(e) => return refusal("perturbation", &loaded, params, e),
    };
    let m = Perturbation::unit(&model, scale);
    let mut rep = match perturbation_bound_check(&model, &m, bound, &grid) {
        Ok(r) => {
            let ok = r.bounded && r.fitted_constant.is_finite();
            let verdict = if ok { "bounded" } else { "growing" };
            (
                report("perturbation", &loaded, params, to_value(&r), verdict),
                ok,
            )
        }
        Err(e) => refusal("perturbation", &loaded, params, e)?,
    };
    rep.0.grid = Some(grid_json(&grid));
    rep.0.bounds = Some(json!({"coefficients": bound}));
    Ok(rep)
}

fn scalar(text: &str) -> Result<Complex64, UsageError> {
    let s: GScalar = text
        .parse()
        .map_err(|e| UsageError(format!("bad scalar `{text}`: {e}")))?;
    Ok(s.to_complex())
}

fn standalone(command: &str, parameters: Value, results: Value, verdict: &str) -> ReportFile {
    ReportFile {
        command: command.into(),
        input_digest: digest(nilorbit::format::canonical_json(&parameters).as_bytes()),
        parameters,
        results,
        seed: None,
        grid: None,
        bounds: None,
        verdict: verdict.into(),
    }
}

fn triangular_system(cmat: &str, eps2: Option<f64>) -> CmdResult {
    let rows: Vec<Vec<f64>> =
        serde_json::from_str(cmat).map_err(|e| UsageError(format!("bad --cmat: {e}")))?;
    let c = LowerTriangular::new(rows)?;
    let params = json!({"cmat": c.rows(), "eps2": eps2});
    match eps2 {
        Some(e) => {
            let r = triangular_check(&c, e)?;
            let ok = r.forces_zero && r.agree;
            let verdict = match (r.forces_zero, r.agree) {
                (_, false) => "criteria_disagree",
                (true, true) => "forces_zero",
                (false, true) => "nonzero_solution",
            };
            Ok((
                standalone("triangular-system", params, to_value(&r), verdict),
                ok,
            ))
        }
        None => {
            let found = find_eps2(&c);
            let results = match found {
                Some(e) => json!({"eps2": e, "check": to_value(&triangular_check(&c, e)?)}),
                None => json!({"eps2": null}),
            };
            let verdict = if found.is_some() { "found" } else { "none" };
            Ok((
                standalone("triangular-system", params, results, verdict),
                found.is_some(),
            ))
        }
    }
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<(), UsageError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| UsageError(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool, UsageError> {
    let (rep, ok, output) = match cli.command {
        Command::Example { name, list, out } => {
            if list || name.is_none() {
                let lines: Vec<String> = catalogue().into_iter().map(|r| r.name).collect();
                write_out(&out, &(lines.join("\n") + "\n"))?;
                return Ok(true);
            }
            let orbit = recipe(name.as_deref().unwrap())?;
            write_out(&out, &serialize_orbit(&orbit))?;
            return Ok(true);
        }
        Command::Validate { input, output } => {
            let (r, ok) = validate(&input)?;
            (r, ok, output)
        }
        Command::LimitMhs { input, output } => {
            let (r, ok) = limit_mhs(&input)?;
            (r, ok, output)
        }
        Command::Bigrading { input, output } => {
            let (r, ok) = bigrading(&input)?;
            (r, ok, output)
        }
        Command::Alpha { input, output } => {
            let (r, ok) = alpha(&input)?;
            (r, ok, output)
        }
        Command::EstimateEpsilon {
            input,
            grid,
            bound,
            target,
            output,
        } => {
            let (r, ok) = estimate(&input, &grid, bound, target.as_deref())?;
            (r, ok, output)
        }
        Command::FindAccumulation {
            input,
            target,
            tol,
            bound,
            r,
            y_max,
            output,
        } => {
            let (rep, ok) = accumulation(&input, &target, tol, bound, r, y_max)?;
            (rep, ok, output)
        }
        Command::CertifySeparation {
            input,
            target,
            radius,
            bound,
            r,
            y_max,
            epsilon,
            output,
        } => {
            let (rep, ok) = separation(&input, &target, radius, bound, r, y_max, epsilon)?;
            (rep, ok, output)
        }
        Command::Perturbation {
            input,
            grid,
            bound,
            scale,
            output,
        } => {
            let (r, ok) = perturbation(&input, &grid, bound, scale)?;
            (r, ok, output)
        }
        Command::PolyBound {
            n,
            n1,
            n2,
            a,
            a_prime,
            eps,
            r,
            y_max,
            trials,
            coeff_box,
            seed,
            output,
        } => {
            let p = PolyBoundParams {
                n,
                n1,
                n2,
                a: scalar(&a)?,
                a_prime: scalar(&a_prime)?,
                eps,
                r,
                y_max,
                trials,
                seed,
                coeff_box,
            };
            let res = poly_bound_harness(&p)?;
            let ok = res.violations == 0 && res.fitted_c.is_finite();
            let mut rep = standalone(
                "poly-bound",
                to_value(&p),
                to_value(&res),
                if ok { "no_violation" } else { "violation" },
            );
            rep.seed = Some(seed);
            rep.bounds = Some(json!({"r": r, "y_max": y_max, "coeff_box": coeff_box}));
            (rep, ok, output)
        }
        Command::TriangularSystem { cmat, eps2, output } => {
            let (r, ok) = triangular_system(&cmat, eps2)?;
            (r, ok, output)
        }
    };
    let text = if output.text {
        rep.to_text()
    } else {
        rep.to_json()
    };
    write_out(&output.out, &text)?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
