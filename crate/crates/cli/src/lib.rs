//! Command-line frontend for the `liouville` library.

pub mod config;
pub mod parse;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use liouville::contact3d::{
    ad_matrix, field_from_hamiltonian, germ_route_linearization, homogeneous_basis,
    is_strictly_contact, lie_residual_3d, lift_liouville, liouville_homogeneous, liouville_sum,
    normal_form_linearize,
};
use liouville::dynamics::{parameter_sweep, phase_portrait, Family, PortraitSpec, Window};
use liouville::germclass::{
    certify_normal_form, classify_germ, normalizing_diffeo, rk_action, GermKind,
};
use liouville::linalg::{is_diagonal, to_strings};
use liouville::liouville2d::{
    equilibria, field_from_germ, lie_residual_2d, liouville_diffeo_linearize, pushforward,
    singularity_class_tangent, transversality_check, GermFamily, LiouvilleDiffeo,
};
use liouville::{sample, Error, Jet, Rational, TrivarPoly, DEFAULT_ORDER};

use config::Config;
use parse::{parse_germ, parse_rational, GermError, ParseError};

/// Failure report: `kind` goes to the error JSON, `code` is the exit status.
#[derive(Debug)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    pub code: i32,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            kind: "Usage".into(),
            message: message.into(),
            code: 1,
        }
    }

    fn undecidable(kind: &str, message: impl Into<String>) -> Self {
        Self {
            kind: kind.into(),
            message: message.into(),
            code: 2,
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        Self {
            kind: "Invariant".into(),
            message: message.into(),
            code: 3,
        }
    }

    pub fn to_json(&self) -> String {
        json!({"error": self.kind, "message": self.message}).to_string()
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ZeroGerm { .. }
            | Error::ResonantMultiplier(_)
            | Error::Obstructed { .. }
            | Error::IrrationalScaling { .. } => 2,
            Error::Invariant(_) => 3,
            _ => 1,
        };
        Self {
            kind: e.kind().into(),
            message: e.to_string(),
            code,
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        Self {
            kind: "ParseError".into(),
            message: e.to_string(),
            code: 1,
        }
    }
}

impl From<GermError> for CliError {
    fn from(e: GermError) -> Self {
        match e {
            GermError::Parse(p) => p.into(),
            other => Self::usage(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    #[value(name = "Q", alias = "q")]
    Q,
    #[value(name = "T", alias = "t")]
    T,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Q => Family::Q,
            FamilyArg::T => Family::T,
        }
    }
}

/// Liouville vector fields: germ classification, plane and contact normal
/// forms, and numerical phase portraits.
#[derive(Debug, Parser)]
#[command(name = "liouville", version)]
pub struct Cli {
    /// Jet truncation order.
    #[arg(long, global = true)]
    pub order: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Seed for randomized runs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file (portraits, or a copy of the report).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// `key = value` file with order, window, seeds, step, t.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a germ f(y) under the RK action.
    Classify {
        #[arg(allow_hyphen_values = true)]
        germ: String,
    },
    /// Normalizing diffeomorphism together with its certificate.
    Normalize {
        #[arg(allow_hyphen_values = true)]
        germ: String,
    },
    /// The plane Liouville field of a germ and its Lie residual.
    Field {
        #[arg(allow_hyphen_values = true)]
        germ: String,
    },
    /// Lift of the plane field to a contact field with z-component x f(y) + c.
    Lift {
        #[arg(allow_hyphen_values = true)]
        germ: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        c: String,
    },
    /// Equilibria with y in a range.
    Equilibria {
        #[arg(allow_hyphen_values = true)]
        germ: String,
        /// `lo,hi`
        #[arg(long, allow_hyphen_values = true, default_value = "-2,2")]
        range: String,
    },
    /// Tangent space of the singularity class, truncated at a degree.
    Tangent {
        #[arg(allow_hyphen_values = true)]
        germ: String,
        #[arg(long)]
        deg: usize,
    },
    /// Transversality of an unfolding to its singularity class.
    Transversal {
        #[arg(long, value_enum)]
        family: FamilyArg,
    },
    /// Phase portrait of a family member as SVG (or CSV).
    Portrait {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Parameter values, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        params: String,
        /// `xmin,xmax,ymin,ymax`
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// `NxM` seeds per axis.
        #[arg(long)]
        seeds: Option<String>,
        /// Integration time in each direction.
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
    },
    /// Equilibria over a parameter grid with bifurcations flagged.
    Sweep {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Points separated by `;`, coordinates by `,`; a coordinate may be
        /// a range `lo:hi:count`, expanded as a product.
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        /// `lo,hi` range of y searched for equilibria.
        #[arg(long, allow_hyphen_values = true, default_value = "-2,2")]
        range: String,
    },
    /// Homogeneous basis of strictly contact fields of a degree.
    Basis3d {
        #[arg(long)]
        degree: u32,
    },
    /// Matrix of ad_{X1} on the homogeneous basis.
    Admatrix {
        #[arg(long)]
        degree: u32,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
    },
    /// Linearize X1 + sum c_d X_d; coefficients c_1,c_2,... comma separated.
    Linearize3d {
        #[arg(allow_hyphen_values = true)]
        coeffs: String,
    },
    /// Linearize a Liouville diffeomorphism given by its generator h(y).
    Linmap {
        #[arg(allow_hyphen_values = true)]
        germ: String,
    },
    /// Run the symbolic identity checks on models and random samples.
    Verify {
        /// Random samples per check.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

/// What a command produced: a JSON report, or raw text (CSV / SVG).
enum Output {
    Json(Value),
    Text(String),
}

struct Ctx {
    order: usize,
    format: Format,
    seed: u64,
    out: Option<PathBuf>,
    config: Config,
}

impl Ctx {
    fn json_only(&self, what: &str) -> CliResult<()> {
        match self.format {
            Format::Json => Ok(()),
            Format::Csv => Err(CliError::usage(format!("{} has no CSV output", what))),
        }
    }

    fn setting<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.config
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| CliError::usage(format!("config: bad value for {}: {}", key, v)))
            })
            .transpose()
    }
}

fn to_value<T: Serialize>(v: &T) -> CliResult<Value> {
    serde_json::to_value(v).map_err(|e| CliError::internal(e.to_string()))
}

fn jet_strings(j: &Jet) -> Vec<String> {
    j.coeffs().iter().map(|c| c.to_string()).collect()
}

fn f64_pair(s: &str, what: &str) -> CliResult<(f64, f64)> {
    let v = f64_list(s, what)?;
    match v.as_slice() {
        [a, b] if a <= b => Ok((*a, *b)),
        _ => Err(CliError::usage(format!(
            "{}: expected lo,hi with lo <= hi, got '{}'",
            what, s
        ))),
    }
}

fn f64_list(s: &str, what: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|p| {
            let r = parse_rational(p.trim())
                .map_err(|e| CliError::usage(format!("{}: {}", what, e)))?;
            Ok(liouville::scalar::Scalar::to_f64(&r))
        })
        .collect()
}

fn rational_list(s: &str) -> CliResult<Vec<Rational>> {
    s.split(',')
        .map(|p| Ok(parse_rational(p.trim())?))
        .collect()
}

/// One grid coordinate: a value, or `lo:hi:count`.
fn axis(s: &str) -> CliResult<Vec<Rational>> {
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    match parts.as_slice() {
        [v] => Ok(vec![parse_rational(v)?]),
        [lo, hi, n] => {
            let lo = parse_rational(lo)?;
            let hi = parse_rational(hi)?;
            let n: i64 = n
                .parse()
                .map_err(|_| CliError::usage(format!("grid: bad count '{}'", n)))?;
            if n < 1 {
                return Err(CliError::usage("grid: count must be at least 1"));
            }
            if n == 1 {
                return Ok(vec![lo]);
            }
            let step = (&hi - &lo) / Rational::from_integer((n - 1).into());
            Ok((0..n)
                .map(|i| &lo + &step * Rational::from_integer(i.into()))
                .collect())
        }
        _ => Err(CliError::usage(format!("grid: bad coordinate '{}'", s))),
    }
}

fn parse_grid(s: &str, params: usize) -> CliResult<Vec<Vec<Rational>>> {
    let mut grid = Vec::new();
    for point in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let axes = point.split(',').map(axis).collect::<CliResult<Vec<_>>>()?;
        if axes.len() != params {
            return Err(CliError::usage(format!(
                "grid point '{}' has {} coordinates, the family takes {}",
                point,
                axes.len(),
                params
            )));
        }
        let mut pts: Vec<Vec<Rational>> = vec![Vec::new()];
        for values in axes {
            pts = pts
                .into_iter()
                .flat_map(|p| {
                    values.iter().map(move |v| {
                        let mut q = p.clone();
                        q.push(v.clone());
                        q
                    })
                })
                .collect();
        }
        grid.extend(pts);
    }
    if grid.is_empty() {
        return Err(CliError::usage("empty grid"));
    }
    Ok(grid)
}

fn classify(ctx: &Ctx, germ: &str) -> CliResult<Output> {
    ctx.json_only("classify")?;
    let f = parse_germ(germ, ctx.order)?;
    let class = classify_germ(&f);
    if let GermKind::Undetermined { order } = class.kind {
        return Err(CliError::undecidable(
            "Undetermined",
            format!(
                "germ vanishes through order {}; the class is not determined",
                order
            ),
        ));
    }
    let mut v = to_value(&class)?;
    v["symbol"] = json!(table_symbol(&class));
    v["germ"] = json!(jet_strings(&f));
    Ok(Output::Json(v))
}

/// Symbol as printed in the classification table: `A0^a`, `A1`, `A2^+`.
fn table_symbol(class: &liouville::GermClass) -> String {
    match (&class.kind, class.sign()) {
        (GermKind::Linear(_), _) => "A0^a".into(),
        (GermKind::Power { k, .. }, Some(s)) if k % 2 == 1 => {
            format!("{}^{}", class.symbol(), if s > 0 { '+' } else { '-' })
        }
        _ => class.symbol(),
    }
}

fn normalize(ctx: &Ctx, germ: &str) -> CliResult<Output> {
    ctx.json_only("normalize")?;
    let f = parse_germ(germ, ctx.order)?;
    let (phi, class) = normalizing_diffeo(&f)?;
    let image = rk_action(&f, &phi);
    let verified = certify_normal_form(&f, &phi, &class);
    if !verified {
        return Err(CliError::internal(
            "normalizing diffeo failed its certificate",
        ));
    }
    Ok(Output::Json(json!({
        "class": to_value(&class)?,
        "diffeo": jet_strings(phi.jet()),
        "certificate": {
            "image": jet_strings(&image),
            "order": image.order(),
            "verified": verified,
        },
    })))
}

fn field(ctx: &Ctx, germ: &str) -> CliResult<Output> {
    ctx.json_only("field")?;
    let f = parse_germ(germ, ctx.order)?;
    let x = field_from_germ(&f);
    let (rx, ry) = lie_residual_2d(&x);
    Ok(Output::Json(json!({
        "field": to_value(&x)?,
        "residual": [to_value(&rx)?, to_value(&ry)?],
        "residual_zero": rx.is_zero() && ry.is_zero(),
    })))
}

fn lift(ctx: &Ctx, germ: &str, c: &str) -> CliResult<Output> {
    ctx.json_only("lift")?;
    let f = parse_germ(germ, ctx.order)?;
    let c = parse_rational(c)?;
    let x = lift_liouville(&field_from_germ(&f), &c)?;
    Ok(Output::Json(json!({
        "field": to_value(&x)?,
        "strictly_contact": is_strictly_contact(&x),
    })))
}

fn equilibria_cmd(ctx: &Ctx, germ: &str, range: &str) -> CliResult<Output> {
    let f = parse_germ(germ, ctx.order)?;
    let (lo, hi) = f64_pair(range, "range")?;
    let eq = equilibria(&field_from_germ(&f), lo, hi)?;
    match ctx.format {
        Format::Json => Ok(Output::Json(to_value(&eq)?)),
        Format::Csv => {
            let mut s = String::from("x,y,type,lambda1,lambda2,exact\n");
            for e in &eq {
                let [x, y] = e.location_f64();
                let (l1, l2) = match e.eigenvalues_f64() {
                    Some((a, b)) => (a.to_string(), b.to_string()),
                    None => (String::new(), String::new()),
                };
                let ty = to_value(&e.kind)?;
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    x,
                    y,
                    ty.as_str().unwrap_or_default(),
                    l1,
                    l2,
                    e.is_exact()
                ));
            }
            Ok(Output::Text(s))
        }
    }
}

fn tangent(ctx: &Ctx, germ: &str, deg: usize) -> CliResult<Output> {
    ctx.json_only("tangent")?;
    let f = parse_germ(germ, ctx.order)?;
    let t = singularity_class_tangent(&f, deg)?;
    Ok(Output::Json(json!({
        "degree": deg,
        "columns": t.cols(),
        "rank": t.rank(),
        "codim": t.cols() - t.rank(),
        "pivots": t.pivots(),
        "basis": to_strings(t.basis()),
    })))
}

fn model(family: Family, order: usize) -> (GermFamily, Jet) {
    match family {
        Family::Q => (GermFamily::q(order), Jet::from_ints(order, &[0, 0, 1])),
        Family::T => (GermFamily::t(order), Jet::from_ints(order, &[0, 0, 0, 1])),
    }
}

fn transversal(ctx: &Ctx, family: Family) -> CliResult<Output> {
    ctx.json_only("transversal")?;
    let (fam, m) = model(family, ctx.order);
    let t = transversality_check(&fam, &m, ctx.order)?;
    let mut v = to_value(&t)?;
    v["family"] = to_value(&family)?;
    v["model"] = json!(jet_strings(&m));
    Ok(Output::Json(v))
}

fn portrait_spec(
    ctx: &Ctx,
    window: Option<String>,
    seeds: Option<String>,
    t: Option<f64>,
    step: Option<f64>,
) -> CliResult<PortraitSpec> {
    let mut spec = PortraitSpec::default();
    if let Some(w) = ctx.setting(window, "window")? {
        let v = f64_list(&w, "window")?;
        if v.len() != 4 {
            return Err(CliError::usage("window: expected xmin,xmax,ymin,ymax"));
        }
        spec.window = Window::new(v[0], v[1], v[2], v[3])?;
    }
    if let Some(s) = ctx.setting(seeds, "seeds")? {
        let (a, b) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| CliError::usage("seeds: expected NxM"))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| CliError::usage(format!("seeds: bad count '{}'", v)))
        };
        spec.seeds = (parse(a)?, parse(b)?);
    }
    if let Some(t) = ctx.setting(t, "t")? {
        spec.t_end = t;
    }
    if let Some(h) = ctx.setting(step, "step")? {
        spec.step = h;
    }
    if !(spec.t_end > 0.0 && spec.step > 0.0 && spec.t_end.is_finite()) {
        return Err(CliError::usage("t and step must be positive"));
    }
    Ok(spec)
}

fn portrait(ctx: &Ctx, family: Family, params: &str, spec: PortraitSpec) -> CliResult<Output> {
    let params = rational_list(params)?;
    let x = family.field(&params, ctx.order)?;
    let data = phase_portrait(&x, &spec)?;
    let body = match ctx.format {
        Format::Json => data.to_svg(),
        Format::Csv => data.to_csv(),
    };
    match &ctx.out {
        None => Ok(Output::Text(body)),
        Some(path) => {
            write_file(path, &body)?;
            Ok(Output::Json(json!({
                "family": to_value(&family)?,
                "params": params.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "file": path.display().to_string(),
                "format": if ctx.format == Format::Json { "svg" } else { "csv" },
                "curves": data.curves.len(),
                "saddles": data.saddles().count(),
                "lines": data.lines(),
                "spec": to_value(&data.spec)?,
            })))
        }
    }
}

fn sweep(ctx: &Ctx, family: Family, grid: &str, range: &str) -> CliResult<Output> {
    let grid = parse_grid(grid, family.params())?;
    let y_range = f64_pair(range, "range")?;
    let r = parameter_sweep(family, &grid, y_range)?;
    match ctx.format {
        Format::Json => Ok(Output::Json(to_value(&r)?)),
        Format::Csv => {
            let flagged = r.flagged();
            let mut s = String::from("index,params,saddles,lines,bifurcation\n");
            for (i, p) in r.points.iter().enumerate() {
                let params: Vec<String> = p.params.iter().map(|v| v.to_string()).collect();
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    i,
                    params.join(" "),
                    p.summary.saddles,
                    p.summary.lines,
                    flagged.contains(&i)
                ));
            }
            Ok(Output::Text(s))
        }
    }
}

fn basis3d(ctx: &Ctx, degree: u32) -> CliResult<Output> {
    ctx.json_only("basis3d")?;
    Ok(Output::Json(to_value(&homogeneous_basis(degree)?)?))
}

fn admatrix(ctx: &Ctx, degree: u32, a: &str) -> CliResult<Output> {
    let a = parse_rational(a)?;
    let m = ad_matrix(&a, degree)?;
    match ctx.format {
        Format::Json => Ok(Output::Json(json!({
            "degree": degree,
            "a": a.to_string(),
            "size": m.len(),
            "diagonal": is_diagonal(&m),
            "matrix": to_strings(&m),
        }))),
        Format::Csv => Ok(Output::Text(
            to_strings(&m)
                .into_iter()
                .map(|row| row.join(",") + "\n")
                .collect(),
        )),
    }
}

fn linearize3d(ctx: &Ctx, coeffs: &str) -> CliResult<Output> {
    ctx.json_only("linearize3d")?;
    let mut c = vec![Rational::zero()];
    c.extend(rational_list(coeffs)?);
    let x = liouville_sum(&c);
    let n = u32::try_from(ctx.order).map_err(|_| CliError::usage("order too large"))?;
    let lin = normal_form_linearize(&x, n)?;
    let germ_route = germ_route_linearization(&x, n)?;
    Ok(Output::Json(json!({
        "input": to_value(&x)?,
        "linearization": to_value(&lin)?,
        "routes_agree": germ_route == lin.plane_map,
    })))
}

fn linmap(ctx: &Ctx, germ: &str) -> CliResult<Output> {
    ctx.json_only("linmap")?;
    let h = liouville::DiffeoGerm::new(parse_germ(germ, ctx.order)?)?;
    let (psi, residual) = liouville_diffeo_linearize(&h)?;
    let lambda = h.multiplier().clone();
    let map = LiouvilleDiffeo::new(psi.clone());
    let (mx, my) = map.components();
    Ok(Output::Json(json!({
        "multiplier": lambda.to_string(),
        "a": (Rational::one() / &lambda).to_string(),
        "psi": jet_strings(psi.jet()),
        "residual": jet_strings(&residual),
        "residual_zero": residual.is_zero(),
        "plane_map": {"x": to_value(&mx)?, "y": to_value(&my)?},
    })))
}

fn verify(ctx: &Ctx, samples: usize) -> CliResult<Output> {
    ctx.json_only("verify")?;
    let n = ctx.order.max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut checks = Vec::new();
    let mut record = |name: &str, count: usize, passed: usize| {
        checks.push(json!({"check": name, "count": count, "passed": passed}));
        passed == count
    };

    let mut models: Vec<Jet> = vec![
        Jet::one(n),
        Jet::from_ints(n, &[0, 2]),
        Jet::from_ints(n, &[0, -3]),
    ];
    for k in 2..=6.min(n) {
        models.push(Jet::monomial(n, k, Rational::one()));
        models.push(Jet::monomial(n, k, -Rational::one()));
    }
    let random_germs: Vec<Jet> = (0..samples)
        .map(|_| sample::jet(&mut rng, n, 0, n, 5))
        .collect();
    let plane_ok = models
        .iter()
        .chain(&random_germs)
        .filter(|f| {
            let (a, b) = lie_residual_2d(&field_from_germ(f));
            a.is_zero() && b.is_zero()
        })
        .count();
    let mut ok = record("plane Lie residual", models.len() + samples, plane_ok);

    let lift_ok = models
        .iter()
        .chain(&random_germs)
        .filter(|f| {
            lift_liouville(&field_from_germ(f), &Rational::one())
                .map(|x| is_strictly_contact(&x))
                .unwrap_or(false)
        })
        .count();
    ok &= record("contact residual of lifts", models.len() + samples, lift_ok);

    let mut ham_ok = 0;
    for _ in 0..samples {
        let h = TrivarPoly::from_terms(
            (0..=6u32)
                .flat_map(|i| (0..=6 - i).map(move |j| [i, j, 0]))
                .map(|e| (e, sample::rational(&mut rng, 5, 3))),
        );
        let x = field_from_hamiltonian(&h)?;
        ham_ok += usize::from(lie_residual_3d(&x).iter().all(|p| p.is_zero()));
    }
    ok &= record("contact residual of Hamiltonian fields", samples, ham_ok);

    let xd_ok = (1..=8)
        .filter(|&d| is_strictly_contact(&liouville_homogeneous(d)))
        .count();
    ok &= record("contact residual of X_1..X_8", 8, xd_ok);

    let mut square_ok = 0;
    for _ in 0..samples {
        let f = sample::jet(&mut rng, n, 0, n, 5);
        let h = sample::diffeo(&mut rng, n, n, 3);
        let pushed = pushforward(&LiouvilleDiffeo::new(h.clone()), &field_from_germ(&f))?;
        square_ok += usize::from(pushed == field_from_germ(&rk_action(&f, &h)));
    }
    ok &= record(
        "pushforward commutes with the RK action",
        samples,
        square_ok,
    );

    let report = json!({"seed": ctx.seed, "order": n, "passed": ok, "checks": checks});
    if !ok {
        return Err(CliError::internal(format!(
            "identity check failed: {}",
            report
        )));
    }
    Ok(Output::Json(report))
}

fn write_file(path: &PathBuf, body: &str) -> CliResult<()> {
    std::fs::write(path, body)
        .map_err(|e| CliError::usage(format!("cannot write {}: {}", path.display(), e)))
}

fn dispatch(cli: Cli) -> CliResult<String> {
    let config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let mut ctx = Ctx {
        order: DEFAULT_ORDER,
        format: cli.format,
        seed: cli.seed,
        out: cli.out,
        config,
    };
    ctx.order = ctx.setting(cli.order, "order")?.unwrap_or(DEFAULT_ORDER);
    if ctx.order == 0 {
        return Err(CliError::usage("order must be positive"));
    }
    let out = match cli.command {
        Command::Classify { germ } => classify(&ctx, &germ),
        Command::Normalize { germ } => normalize(&ctx, &germ),
        Command::Field { germ } => field(&ctx, &germ),
        Command::Lift { germ, c } => lift(&ctx, &germ, &c),
        Command::Equilibria { germ, range } => equilibria_cmd(&ctx, &germ, &range),
        Command::Tangent { germ, deg } => tangent(&ctx, &germ, deg),
        Command::Transversal { family } => transversal(&ctx, family.into()),
        Command::Portrait {
            family,
            params,
            window,
            seeds,
            t,
            step,
        } => {
            let spec = portrait_spec(&ctx, window, seeds, t, step)?;
            let out = portrait(&ctx, family.into(), &params, spec)?;
            return render(out, &ctx, true);
        }
        Command::Sweep {
            family,
            grid,
            range,
        } => sweep(&ctx, family.into(), &grid, &range),
        Command::Basis3d { degree } => basis3d(&ctx, degree),
        Command::Admatrix { degree, a } => admatrix(&ctx, degree, &a),
        Command::Linearize3d { coeffs } => linearize3d(&ctx, &coeffs),
        Command::Linmap { germ } => linmap(&ctx, &germ),
        Command::Verify { samples } => verify(&ctx, samples),
    }?;
    render(out, &ctx, false)
}

/// Text for stdout; `--out` also receives a copy unless the command
/// already wrote its own file.
fn render(out: Output, ctx: &Ctx, wrote_file: bool) -> CliResult<String> {
    let text = match out {
        Output::Json(v) => {
            serde_json::to_string_pretty(&v).map_err(|e| CliError::internal(e.to_string()))? + "\n"
        }
        Output::Text(t) => t,
    };
    if let (Some(path), false) = (&ctx.out, wrote_file) {
        write_file(path, &text)?;
    }
    Ok(text)
}

/// Runs the command line and returns the exit status; output goes to the
/// given writers.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{}", e);
                return 0;
            }
            let err = CliError::usage(e.to_string().trim_end());
            let _ = writeln!(stderr, "{}", err.to_json());
            return err.code;
        }
    };
    match dispatch(cli) {
        Ok(text) => {
            let _ = stdout.write_all(text.as_bytes());
            0
        }
        Err(err) => {
            let _ = writeln!(stderr, "{}", err.to_json());
            err.code
        }
    }
}
