//! The `syz` command line: argument parsing, dispatch and output writing.
//!
//! Exit codes: 0 on success, 1 on a computation error (a JSON error report
//! is printed on stdout), 2 on a usage error (message on stderr).

pub mod svg;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use svg::{render_svg, GraphLayout, Label, Scene};
use syz_core::amoeba::{
    build_spine, compactified_amoeba, complement_components, rasterize_amoeba, ronkin_order, ronkin_value,
    spine_retract_check, AmoebaRaster, ComplementComponent, Window, DEFAULT_GRID,
};
use syz_core::gamma::{build_gamma_simplex, conifold_move, flop_move, mirror_graph, GammaGraph};
use syz_core::laurent::{baker_genus, LaurentPolynomial};
use syz_core::local::{
    hl_discriminant_classify, hl_map, joyce_f, joyce_n_member, joyce_roundtrip, random_point, ribbon_classify,
    sample_hl_fiber, sample_joyce_fiber, sample_rng, slag_check, FiberModel, SlagOptions, FIBER_TOL, C3,
};
use syz_core::local::Sign as JoyceSign;
use syz_core::monodromy::{
    classify_vertex, common_fixed_space, fixed_space, mirror_dual, parse_matrix, parse_matrix_list, parse_triple,
    search_k3_list, semistable_k, validate_k3_list, MatrixDocument, MatrixListDocument, MonodromyMatrix,
};

#[derive(Debug, Parser)]
#[command(name = "syz", version, about = "Amoebas, tropical spines, discriminant graphs and local special Lagrangian models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rasterize the amoeba of a bivariate polynomial
    Amoeba(AmoebaArgs),
    /// Tropical spine from the complement components and Ronkin constants
    Spine(SpineArgs),
    /// Ronkin function value and component order at a point
    Ronkin(RonkinArgs),
    /// Complement components with orders and Ronkin constants
    Components(SpineArgs),
    /// Moment-map image of the curve inside its Newton polygon
    Compactify(CompactifyArgs),
    /// Discriminant graphs
    #[command(subcommand)]
    Gamma(GammaCommand),
    /// Integer monodromy matrices
    #[command(subcommand)]
    Monodromy(MonodromyCommand),
    /// Local special Lagrangian fibrations of C^3
    #[command(subcommand)]
    Local(LocalCommand),
}

#[derive(Debug, Args)]
pub struct AmoebaArgs {
    /// Polynomial JSON document
    #[arg(long)]
    pub poly: PathBuf,
    /// Log-space window
    #[arg(long, num_args = 4, value_names = ["XMIN", "XMAX", "YMIN", "YMAX"], allow_negative_numbers = true, default_values_t = [-5.0, 5.0, -5.0, 5.0])]
    pub window: Vec<f64>,
    /// Pixels per side
    #[arg(long, default_value_t = 256)]
    pub resolution: usize,
    /// Phases per fiber before local refinement
    #[arg(long, default_value_t = 256)]
    pub angular: usize,
    /// Output file (.csv, .svg or .json); JSON summary on stdout otherwise
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpineArgs {
    #[command(flatten)]
    pub amoeba: AmoebaArgs,
    /// Quadrature grid for the Ronkin function
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct RonkinArgs {
    #[arg(long)]
    pub poly: PathBuf,
    /// Point in log space
    #[arg(long, num_args = 1.., required = true, allow_negative_numbers = true)]
    pub point: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct CompactifyArgs {
    #[arg(long)]
    pub poly: PathBuf,
    #[arg(long, default_value_t = 256)]
    pub resolution: usize,
    /// Fibers are sampled over [-E, E] in log space
    #[arg(long, default_value_t = 12.0)]
    pub log_extent: f64,
    #[arg(long, default_value_t = 256)]
    pub angular: usize,
    /// Output file (.csv, .svg or .json)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum GammaCommand {
    /// Graph of the degree-d simplex family (d = 5: the quintic)
    Build {
        #[arg(long)]
        degree: usize,
        /// Output file (.json, .dot or .svg)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Vertex counts, Euler characteristic and label validation
    Stats { graph: PathBuf },
    /// Flip vertex kinds and dualize labels
    Mirror {
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Flop along an edge
    Flop {
        graph: PathBuf,
        #[arg(long)]
        edge: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Conifold rewrite along an edge
    Conifold {
        graph: PathBuf,
        #[arg(long)]
        edge: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum MonodromyCommand {
    /// Fixed sublattice and semistable invariant of a matrix
    Fixed { matrix: PathBuf },
    /// Classify a vertex triple
    Classify { triple: PathBuf },
    /// Inverse transpose of a matrix or of every matrix in a list
    Mirror {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a list of 2x2 monodromies of an elliptic K3; the constructed
    /// 24-matrix list is used when no file is given
    K3check {
        list: Option<PathBuf>,
        /// Also write the checked list
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    #[value(name = "+")]
    Plus,
    #[value(name = "-")]
    Minus,
}

impl From<SignArg> for JoyceSign {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Plus => JoyceSign::Plus,
            SignArg::Minus => JoyceSign::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Hl,
    Joyce,
}

#[derive(Debug, Subcommand)]
pub enum LocalCommand {
    /// Evaluate the Harvey–Lawson map at a point of C^3
    Hl {
        /// Three complex numbers such as `1.5`, `-2i` or `0.3-1.2i`
        #[arg(long, num_args = 3, value_names = ["Z1", "Z2", "Z3"], allow_hyphen_values = true, value_parser = parse_complex)]
        point: Vec<Complex64>,
    },
    /// Locate a point of R^3 relative to the Harvey–Lawson discriminant
    HlClassify {
        #[arg(long, num_args = 3, value_names = ["X1", "X2", "X3"], allow_negative_numbers = true)]
        x: Vec<f64>,
        #[arg(long, default_value_t = FIBER_TOL)]
        tol: f64,
    },
    /// Check that F± maps random points onto fibers containing them
    Joyce {
        #[arg(long, allow_hyphen_values = true)]
        sign: SignArg,
        #[arg(long, default_value_t = 10_000)]
        roundtrip: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = FIBER_TOL)]
        tol: f64,
    },
    /// Special Lagrangian residuals on sampled fiber points
    Slag {
        #[arg(long)]
        model: ModelArg,
        /// `x1 x2 x3` for hl, `a re(c) im(c)` for joyce
        #[arg(long, num_args = 3, allow_negative_numbers = true)]
        target: Vec<f64>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, allow_hyphen_values = true, default_value = "+")]
        sign: SignArg,
        /// Finite-difference step
        #[arg(long, default_value_t = 1e-5)]
        h: f64,
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
        /// Minimize the volume residual over the phase
        #[arg(long)]
        phase_scan: bool,
    },
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("not a complex number: {text}");
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => v.parse::<f64>().map_err(|_| bad())?,
    };
    let re = re.parse::<f64>().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

/// Error classes mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Compute { kind: &'static str, message: String },
}

fn compute(kind: &'static str, e: impl std::fmt::Display) -> Failure {
    Failure::Compute {
        kind,
        message: e.to_string(),
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn read_poly(path: &Path) -> Result<LaurentPolynomial, Failure> {
    LaurentPolynomial::from_json(&read_input(path)?).map_err(|e| compute("polynomial", e))
}

fn read_graph(path: &Path) -> Result<GammaGraph, Failure> {
    GammaGraph::from_json(&read_input(path)?).map_err(|e| compute("graph", e))
}

fn window_of(a: &AmoebaArgs) -> Result<Window, Failure> {
    let w = &a.window;
    Window::new(w[0], w[1], w[2], w[3], a.resolution).map_err(|e| Failure::Usage(e.to_string()))
}

/// What a command produced, in the renderings it supports.
struct Output {
    json: Value,
    csv: Option<String>,
    svg: Option<String>,
    dot: Option<String>,
    /// JSON written to `--out`, when it differs from the stdout summary.
    json_file: Option<String>,
}

impl Output {
    fn json(json: Value) -> Self {
        Self {
            json,
            csv: None,
            svg: None,
            dot: None,
            json_file: None,
        }
    }
}

fn pretty(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn emit(out: Option<&Path>, o: Output, stdout: &mut dyn Write) -> Result<(), Failure> {
    let Some(path) = out else {
        stdout
            .write_all(pretty(&o.json).as_bytes())
            .map_err(|e| compute("io", e))?;
        return Ok(());
    };
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    let text = match ext {
        "json" => Some(o.json_file.unwrap_or_else(|| pretty(&o.json))),
        "csv" => o.csv,
        "svg" => o.svg,
        "dot" => o.dot,
        _ => None,
    };
    let text = text.ok_or_else(|| Failure::Usage(format!("unsupported output format for this command: {}", path.display())))?;
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn wants(out: Option<&Path>, ext: &str) -> bool {
    out.and_then(|p| p.extension()).and_then(|e| e.to_str()) == Some(ext)
}

fn svg_of(scene: &Scene) -> Result<String, Failure> {
    render_svg(scene).map_err(|e| compute("svg", e))
}

fn raster_summary(r: &AmoebaRaster) -> Value {
    json!({
        "window": r.window(),
        "marked": r.marked_count(),
        "pixels": r.resolution() * r.resolution(),
    })
}

fn order_labels(r: &AmoebaRaster, comps: &[ComplementComponent]) -> Vec<Label> {
    comps
        .iter()
        .filter_map(|c| {
            let o = c.order.as_ref()?;
            let text = format!("({})", o.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","));
            Some(Label {
                at: r.window().center(c.deep_pixel.0, c.deep_pixel.1),
                text,
            })
        })
        .collect()
}

fn components_json(r: &AmoebaRaster, f: &LaurentPolynomial, comps: &[ComplementComponent]) -> Value {
    let list: Vec<Value> = comps
        .iter()
        .map(|c| {
            json!({
                "bounded": c.bounded,
                "pixels": c.pixels.len(),
                "deep_point": r.window().center(c.deep_pixel.0, c.deep_pixel.1),
                "depth": c.depth,
                "order": c.order,
                "ronkin_constant": c.ronkin_constant,
            })
        })
        .collect();
    let genus = f.newton_polytope().ok().and_then(|p| baker_genus(&p).ok());
    json!({
        "components": list,
        "count": comps.len(),
        "bounded": comps.iter().filter(|c| c.bounded).count(),
        "baker_genus": genus,
    })
}

fn run_amoeba(a: &AmoebaArgs) -> Result<Output, Failure> {
    let f = read_poly(&a.poly)?;
    let w = window_of(a)?;
    let r = rasterize_amoeba(&f, &w, a.angular).map_err(|e| compute("amoeba", e))?;
    let mut o = Output::json(raster_summary(&r));
    let out = a.out.as_deref();
    if wants(out, "csv") {
        o.csv = Some(r.to_csv());
    }
    if wants(out, "svg") {
        o.svg = Some(svg_of(&Scene {
            raster: Some(&r),
            ..Scene::default()
        })?);
    }
    Ok(o)
}

fn run_spine(a: &SpineArgs, components_only: bool) -> Result<Output, Failure> {
    let f = read_poly(&a.amoeba.poly)?;
    let w = window_of(&a.amoeba)?;
    let r = rasterize_amoeba(&f, &w, a.amoeba.angular).map_err(|e| compute("amoeba", e))?;
    let comps = complement_components(&r, &f, a.grid).map_err(|e| compute("components", e))?;
    let labels = order_labels(&r, &comps);
    if components_only {
        let mut o = Output::json(components_json(&r, &f, &comps));
        if wants(a.amoeba.out.as_deref(), "svg") {
            o.svg = Some(svg_of(&Scene {
                raster: Some(&r),
                labels,
                ..Scene::default()
            })?);
        }
        return Ok(o);
    }
    let spine = build_spine(&comps);
    let mut json = spine.to_json_value();
    json["retract"] = serde_json::to_value(spine_retract_check(&r, &spine)).expect("serializable");
    let mut o = Output::json(json);
    if wants(a.amoeba.out.as_deref(), "svg") {
        o.svg = Some(svg_of(&Scene {
            raster: Some(&r),
            spine: Some(&spine),
            labels,
            graph: None,
        })?);
    }
    Ok(o)
}

fn run_ronkin(a: &RonkinArgs) -> Result<Output, Failure> {
    let f = read_poly(&a.poly)?;
    let v = ronkin_value(&f, &a.point, a.grid).map_err(|e| compute("ronkin", e))?;
    let order = ronkin_order(&f, &a.point, a.grid).ok();
    let mut json = serde_json::to_value(v).expect("serializable");
    json["order"] = json!(order);
    Ok(Output::json(json))
}

fn run_compactify(a: &CompactifyArgs) -> Result<Output, Failure> {
    let f = read_poly(&a.poly)?;
    let r = compactified_amoeba(&f, a.resolution, a.log_extent, a.angular).map_err(|e| compute("compactify", e))?;
    let mut o = Output::json(raster_summary(&r));
    let out = a.out.as_deref();
    if wants(out, "csv") {
        o.csv = Some(r.to_csv());
    }
    if wants(out, "svg") {
        o.svg = Some(svg_of(&Scene {
            raster: Some(&r),
            ..Scene::default()
        })?);
    }
    Ok(o)
}

fn graph_output(g: &GammaGraph, out: Option<&Path>) -> Result<Output, Failure> {
    let text = g.to_json() + "\n";
    let mut o = Output::json(serde_json::from_str(&text).expect("valid JSON"));
    o.json_file = Some(text);
    o.dot = Some(g.to_dot());
    if wants(out, "svg") {
        o.svg = Some(svg_of(&Scene {
            graph: Some(GraphLayout::circular(g)),
            ..Scene::default()
        })?);
    }
    Ok(o)
}

fn run_gamma(cmd: &GammaCommand) -> Result<(Output, Option<PathBuf>), Failure> {
    Ok(match cmd {
        GammaCommand::Build { degree, out } => {
            if *degree == 0 {
                return Err(Failure::Usage("degree must be at least 1".into()));
            }
            let g = build_gamma_simplex(*degree).map_err(|e| compute("graph", e))?;
            (graph_output(&g, out.as_deref())?, out.clone())
        }
        GammaCommand::Stats { graph } => {
            let g = read_graph(graph)?;
            let mut json = serde_json::to_value(g.stats()).expect("serializable");
            json["labels"] = match g.validate_labels() {
                Ok(()) => json!("consistent"),
                Err(e) => json!(e.to_string()),
            };
            (Output::json(json), None)
        }
        GammaCommand::Mirror { graph, out } => {
            let g = mirror_graph(&read_graph(graph)?);
            (graph_output(&g, out.as_deref())?, out.clone())
        }
        GammaCommand::Flop { graph, edge, out } => {
            let g = flop_move(&read_graph(graph)?, *edge).map_err(|e| compute("flop", e))?;
            (graph_output(&g, out.as_deref())?, out.clone())
        }
        GammaCommand::Conifold { graph, edge, out } => {
            let g = conifold_move(&read_graph(graph)?, *edge).map_err(|e| compute("conifold", e))?;
            (graph_output(&g, out.as_deref())?, out.clone())
        }
    })
}

fn matrix_json(m: &MonodromyMatrix) -> Value {
    serde_json::to_value(MatrixDocument::from(m)).expect("serializable")
}

fn list_json(ms: &[MonodromyMatrix]) -> Value {
    serde_json::to_value(MatrixListDocument {
        matrices: ms.iter().map(MatrixDocument::from).collect(),
    })
    .expect("serializable")
}

fn run_monodromy(cmd: &MonodromyCommand) -> Result<(Output, Option<PathBuf>), Failure> {
    Ok(match cmd {
        MonodromyCommand::Fixed { matrix } => {
            let m = parse_matrix(&read_input(matrix)?).map_err(|e| compute("matrix", e))?;
            let fs = fixed_space(&m);
            (
                Output::json(json!({
                    "dimension": fs.dimension,
                    "basis": fs.basis,
                    "semistable_k": semistable_k(&m),
                })),
                None,
            )
        }
        MonodromyCommand::Classify { triple } => {
            let t = parse_triple(&read_input(triple)?).map_err(|e| compute("matrix", e))?;
            let product = t[0].mul(&t[1]).mul(&t[2]);
            let fs = common_fixed_space(&t);
            (
                Output::json(json!({
                    "class": classify_vertex(&t),
                    "product_is_identity": product.is_identity(),
                    "common_fixed_dimension": fs.dimension,
                    "ks": t.iter().map(semistable_k).collect::<Vec<_>>(),
                    "mirror_class": classify_vertex(&t.clone().map(|m| mirror_dual(&m))),
                })),
                None,
            )
        }
        MonodromyCommand::Mirror { input, out } => {
            let text = read_input(input)?;
            let json = match parse_matrix(&text) {
                Ok(m) => matrix_json(&mirror_dual(&m)),
                Err(_) => {
                    let ms = parse_matrix_list(&text).map_err(|e| compute("matrix", e))?;
                    list_json(&ms.iter().map(mirror_dual).collect::<Vec<_>>())
                }
            };
            (Output::json(json), out.clone())
        }
        MonodromyCommand::K3check { list, out } => {
            let ms = match list {
                Some(p) => parse_matrix_list(&read_input(p)?).map_err(|e| compute("matrix", e))?,
                None => search_k3_list(3).ok_or_else(|| compute("k3", "no 24-matrix list found"))?,
            };
            let report = validate_k3_list(&ms).map_err(|e| compute("k3", e))?;
            if let Some(p) = out {
                emit(Some(p), Output::json(list_json(&ms)), &mut std::io::sink())?;
            }
            let mut json = serde_json::to_value(&report).expect("serializable");
            json["passed"] = json!(report.passed());
            (Output::json(json), None)
        }
    })
}

fn complex_json(z: &Complex64) -> Value {
    json!([z.re, z.im])
}

fn point_json(z: &C3) -> Value {
    Value::Array(z.iter().map(complex_json).collect())
}

fn run_local(cmd: &LocalCommand) -> Result<Output, Failure> {
    Ok(match cmd {
        LocalCommand::Hl { point } => {
            let z: C3 = [point[0], point[1], point[2]];
            let x = hl_map(&z);
            Output::json(json!({
                "z": point_json(&z),
                "x": x,
                "discriminant": hl_discriminant_classify(x, FIBER_TOL),
            }))
        }
        LocalCommand::HlClassify { x, tol } => {
            if !(*tol > 0.0) {
                return Err(Failure::Usage("tolerance must be positive".into()));
            }
            let x = [x[0], x[1], x[2]];
            Output::json(json!({
                "x": x,
                "class": hl_discriminant_classify(x, *tol),
                "ribbon": ribbon_classify(x, *tol),
            }))
        }
        LocalCommand::Joyce {
            sign,
            roundtrip,
            seed,
            tol,
        } => {
            let sign = JoyceSign::from(*sign);
            let failures: Vec<usize> = (0..*roundtrip)
                .filter(|&k| {
                    let z = random_point(&mut sample_rng(*seed, k as u64), 3.0);
                    !joyce_roundtrip(sign, &z, *tol)
                })
                .collect();
            // reverse inclusion on N_{1,0}
            let zero = Complex64::new(0.0, 0.0);
            let fiber = sample_joyce_fiber(sign, 1.0, zero, 100, 0.0, *seed);
            let reverse_ok = fiber.iter().all(|z| {
                let (a, c) = joyce_f(sign, z);
                joyce_n_member(sign, 1.0, zero, z, *tol) && (a - 1.0).abs() < *tol && c.norm() < *tol
            });
            Output::json(json!({
                "sign": sign,
                "samples": roundtrip,
                "failures": failures.len(),
                "first_failures": failures.iter().take(10).collect::<Vec<_>>(),
                "reverse_inclusion": reverse_ok,
                "passed": failures.is_empty() && reverse_ok,
            }))
        }
        LocalCommand::Slag {
            model,
            target,
            samples,
            seed,
            sign,
            h,
            tol,
            phase_scan,
        } => {
            let (points, failures, fiber) = match model {
                ModelArg::Hl => {
                    let x = [target[0], target[1], target[2]];
                    let s = sample_hl_fiber(x, *samples, *seed).map_err(|e| compute("sampler", e))?;
                    (s.points, s.failures, FiberModel::HarveyLawson { target: x })
                }
                ModelArg::Joyce => {
                    let (a, c) = (target[0], Complex64::new(target[1], target[2]));
                    let sign = JoyceSign::from(*sign);
                    let pts = sample_joyce_fiber(sign, a, c, *samples, 0.05, *seed);
                    (pts, 0, FiberModel::Joyce { sign, a, c })
                }
            };
            let opts = SlagOptions {
                h: *h,
                tolerance: *tol,
                phase_scan: *phase_scan,
            };
            let report = slag_check(&points, &fiber, opts).map_err(|e| compute("slag", e))?;
            let mut json = serde_json::to_value(&report).expect("serializable");
            json["model"] = serde_json::to_value(fiber).expect("serializable");
            json["sampler_failures"] = json!(failures);
            Output::json(json)
        }
    })
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> Result<(), Failure> {
    let (output, out) = match &cli.command {
        Command::Amoeba(a) => (run_amoeba(a)?, a.out.clone()),
        Command::Spine(a) => (run_spine(a, false)?, a.amoeba.out.clone()),
        Command::Components(a) => (run_spine(a, true)?, a.amoeba.out.clone()),
        Command::Ronkin(a) => (run_ronkin(a)?, None),
        Command::Compactify(a) => (run_compactify(a)?, a.out.clone()),
        Command::Gamma(c) => run_gamma(c)?,
        Command::Monodromy(c) => run_monodromy(c)?,
        Command::Local(c) => (run_local(c)?, None),
    };
    emit(out.as_deref(), output, stdout)
}

/// Worker count from `SYZ_THREADS`, if set.
fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("SYZ_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("SYZ_THREADS must be a positive integer, got {v:?}")))?;
    // a pool built earlier in this process stays in place
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = configure_threads().and_then(|()| dispatch(&cli, stdout));
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(Failure::Compute { kind, message }) => {
            let report = json!({ "error": { "kind": kind, "message": message } });
            let _ = stdout.write_all(pretty(&report).as_bytes());
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(parse_complex("1.5"), Ok(c(1.5, 0.0)));
        assert_eq!(parse_complex("-2i"), Ok(c(0.0, -2.0)));
        assert_eq!(parse_complex("0.3-1.2i"), Ok(c(0.3, -1.2)));
        assert_eq!(parse_complex("i"), Ok(c(0.0, 1.0)));
        assert_eq!(parse_complex("-i"), Ok(c(0.0, -1.0)));
        assert_eq!(parse_complex("1e-3+2e+1i"), Ok(c(1e-3, 20.0)));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("1+xi").is_err());
    }

    #[test]
    fn help_lists_every_subcommand() {
        use clap::CommandFactory;
        let mut cmd = Cli::command();
        let help = cmd.render_long_help().to_string();
        for name in ["amoeba", "spine", "ronkin", "components", "compactify", "gamma", "monodromy", "local"] {
            assert!(help.contains(name), "{name}");
        }
        cmd.debug_assert();
    }
}
