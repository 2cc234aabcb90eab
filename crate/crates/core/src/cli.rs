//! Command-line front end.
//!
//! [`run`] parses arguments, dispatches, and maps the outcome to an exit code:
//! 0 on success or a clean report, 1 when a check finds a violation, 2 on bad
//! input. Reports are deterministic given the inputs and `--seed`.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::algebra::{Algebra, AlgebraSpec};
use crate::certificate::{resolution_data, Certificate, Mode};
use crate::checker::{check_json, Failure};
use crate::class::{class_member, ClassSpec, Membership, Object, Universe};
use crate::complex::{ChainComplex, ChainMap};
use crate::complex_zigzag::{
    dw_filtration, ex_filtration, staircase, Schedule, StaircaseOptions, Track,
};
use crate::cotorsion::{
    approx_search, check_compatibility, check_cotorsion_pair, check_thick, factor_map, lift,
    ApproxSide, ModelPairs, Retract, Selector,
};
use crate::error::{Error, Result};
use crate::field::{PrimeField, DEFAULT_PRIME_CAP};
use crate::formats::{ChainMapFile, ComplexFile, ModuleFile, ModuleLibraryFile, UniverseFile};
use crate::homological::{
    default_flat_tests, ext_dim, flat_dim, proj_dim, right_regular, right_test_modules, tor_dim,
};
use crate::library;
use crate::module::Module;
use crate::oracle::ext_oracle_table;
use crate::par::Exec;
use crate::random::{
    obstructed_lifting_problem, random_chain_map, random_complex, random_complex_extension,
    random_element, random_exact_complex, random_lifting_problem, rng,
};
use crate::resolution::projective_resolution;
use crate::zigzag::{module_filtration, pure_closure, zigzag_subresolution};

#[derive(Parser, Debug)]
#[command(
    name = "cotorsion",
    version,
    about = "Resolutions, zig-zag filtrations and cotorsion checks over small algebras"
)]
pub struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Where certificates and other artifacts are written.
    #[arg(
        long,
        global = true,
        env = "COTORSION_OUT_DIR",
        default_value = "cotorsion-out"
    )]
    out_dir: PathBuf,
    /// Size budget.
    #[arg(long, global = true, default_value_t = 4)]
    kappa: usize,
    /// Characteristic; a family name such as `T2` resolves to `T2F<prime>` (2 if unset).
    #[arg(long, global = true)]
    prime: Option<u32>,
    #[arg(long, global = true, default_value_t = DEFAULT_PRIME_CAP)]
    prime_cap: u32,
    /// Seed for randomized inputs and suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Disable the data-parallel batch evaluation.
    #[arg(long, global = true)]
    sequential: bool,
    /// Certificate detail: `full` keeps zig-zag runs and ladders, `compact` drops them.
    #[arg(long, global = true, default_value = "full")]
    mode: Mode,
    /// Bundled algebra name, family name, or algebra file.
    #[arg(long, global = true, default_value = "T2F2")]
    algebra: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load data and check its invariants; with no files, checks the bundled library.
    Validate { files: Vec<PathBuf> },
    /// Projective dimension.
    Pd {
        #[arg(long)]
        module: String,
        #[arg(long, default_value_t = 8)]
        cutoff: usize,
    },
    /// Flat dimension.
    Fd {
        #[arg(long)]
        module: String,
        #[arg(long, default_value_t = 8)]
        cutoff: usize,
        /// Test against all right modules up to this dimension instead of the cyclic defaults.
        #[arg(long)]
        test_dim: Option<usize>,
    },
    /// dim Ext^i(M, N).
    Ext {
        #[arg(long)]
        module: String,
        #[arg(long)]
        other: String,
        #[arg(long, default_value_t = 1)]
        degree: usize,
    },
    /// dim Tor_i(T, N) for a right module T (`A`, `D(NAME)` or a file).
    Tor {
        #[arg(long)]
        right: String,
        #[arg(long)]
        module: String,
        #[arg(long, default_value_t = 1)]
        degree: usize,
    },
    /// Canonical projective resolution, written as an artifact.
    Resolve {
        #[arg(long)]
        module: String,
        #[arg(long, default_value_t = 8)]
        length: usize,
    },
    /// Small subresolution through a seed submodule.
    Zigzag {
        #[arg(long)]
        module: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Seed generators as `1,0,0;0,1,0`; defaults to the first basis vector.
        #[arg(long)]
        generators: Option<String>,
    },
    /// Filtration of a module in P_n with small quotients.
    FiltrateModule {
        #[arg(long)]
        module: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Filtration of a complex with degreewise P_n quotients.
    DwFiltrate {
        #[arg(long, default_value = "random")]
        complex: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Filtration of an exact complex with exact P_n quotients.
    ExFiltrate {
        #[arg(long, default_value = "random-exact")]
        complex: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Small exact subcomplex through one element.
    Staircase {
        #[arg(long, default_value = "random-exact")]
        complex: String,
        #[arg(long, default_value = "projective")]
        track: Track,
        /// `default` or a comma-separated cycle of degrees.
        #[arg(long, default_value = "default")]
        schedule: Schedule,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Degree of the element; chosen from the seed when omitted.
        #[arg(long, allow_hyphen_values = true)]
        degree: Option<i64>,
        /// Coordinates of the element, comma-separated.
        #[arg(long)]
        element: Option<String>,
    },
    /// Small pure submodule containing a seed.
    PureClosure {
        #[arg(long)]
        module: String,
        #[arg(long)]
        generators: Option<String>,
        #[arg(long, default_value_t = 3)]
        test_dim: usize,
    },
    /// Orthogonality and perp-closure of a pair on a universe.
    CheckCotorsion {
        /// Class spec, or `{x,y,...}` for an explicit list.
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        universe: Option<String>,
    },
    /// rperp(dw C) against rperp(ex C) & E on a universe of complexes.
    CheckCompat {
        #[arg(long, default_value = "P1")]
        class: String,
        #[arg(long)]
        universe: Option<String>,
    },
    /// Two-out-of-three and retract closure on random samples.
    CheckThick {
        #[arg(long, default_value = "E")]
        class: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Special approximation sequence for one object.
    Approx {
        #[arg(long)]
        object: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        universe: Option<String>,
        #[arg(long, default_value = "enough-projectives")]
        side: ApproxSide,
    },
    /// Diagonals for random lifting squares.
    Lift {
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Use squares over nonsplit extensions, which admit no diagonal.
        #[arg(long)]
        obstructed: bool,
        #[arg(long, default_value = "dw(P0)")]
        a: String,
        #[arg(long, default_value = "E")]
        b: String,
    },
    /// Factor a chain map through the degreewise projective model structure.
    Factor {
        /// Chain map file; otherwise a random map between universe objects.
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long)]
        source: Option<String>,
        #[arg(long)]
        target: Option<String>,
        #[arg(long)]
        universe: Option<String>,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Trivial cofibration followed by a fibration.
        #[arg(long)]
        dual: bool,
    },
    /// Verify certificate files.
    CheckCert {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Walk through the bundled algebras and check every artifact.
    Demo,
}

struct Outcome {
    text: String,
    json: Value,
    code: i32,
}

impl Outcome {
    fn new(text: impl Into<String>, json: Value, ok: bool) -> Self {
        Self {
            text: text.into(),
            json,
            code: if ok { 0 } else { 1 },
        }
    }
}

/// Exit code for an error: 1 for a mathematical obstruction, 2 for bad input.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotInClass(_)
        | Error::BudgetExceeded { .. }
        | Error::ExceedsCutoff(_)
        | Error::NotExact(_)
        | Error::NotFound(_)
        | Error::NoPureExtensionFound(_)
        | Error::NotProjective
        | Error::NotGenerating { .. }
        | Error::NotActionStable(_) => 1,
        _ => 2,
    }
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let json = cli.global.json;
    match dispatch(&cli) {
        Ok(o) => {
            let body = if json {
                serde_json::to_string_pretty(&o.json).expect("json")
            } else {
                o.text
            };
            let _ = writeln!(out, "{}", body.trim_end());
            o.code
        }
        Err(e) => {
            let code = exit_code(&e);
            if json {
                let v = json!({ "error": e.to_string(), "exit": code });
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"));
            }
            let _ = writeln!(err, "error: {e}");
            code
        }
    }
}

struct Ctx<'a> {
    g: &'a Global,
    alg: Arc<Algebra>,
    exec: Exec,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_algebra(g: &Global) -> Result<Arc<Algebra>> {
    if let Some(q) = g.prime {
        PrimeField::with_cap(q, g.prime_cap)?;
    }
    let path = Path::new(&g.algebra);
    let alg = if path.is_file() {
        let spec: AlgebraSpec = serde_json::from_str(&read(path)?)?;
        Arc::new(Algebra::load_with_cap(&spec, g.prime_cap)?)
    } else if library::algebra_names().any(|n| n == g.algebra) {
        library::algebra(&g.algebra)?
    } else {
        let name = format!("{}F{}", g.algebra, g.prime.unwrap_or(2));
        library::algebra(&name).map_err(|_| Error::UnknownName(format!("algebra {}", g.algebra)))?
    };
    let p = alg.field().p();
    PrimeField::with_cap(p, g.prime_cap)?;
    if let Some(q) = g.prime.filter(|&q| q != p) {
        return Err(Error::MalformedSpec(format!(
            "algebra {} is over F{p}, not F{q}",
            alg.name()
        )));
    }
    Ok(alg)
}

impl Ctx<'_> {
    fn module(&self, name: &str) -> Result<Module> {
        let path = Path::new(name);
        if path.is_file() {
            let file: ModuleFile = serde_json::from_str(&read(path)?)?;
            return file.to_module_over(self.alg.clone());
        }
        if name == "A" {
            return Ok(Module::regular(self.alg.clone()));
        }
        library::module(self.alg.name(), name)
    }

    fn right_module(&self, name: &str) -> Result<Module> {
        let op = Arc::new(self.alg.opposite());
        if name == "A" {
            return Ok(right_regular(&self.alg));
        }
        if let Some(inner) = name.strip_prefix("D(").and_then(|s| s.strip_suffix(')')) {
            return Ok(self.module(inner)?.dual(op));
        }
        let path = Path::new(name);
        if path.is_file() {
            let file: ModuleFile = serde_json::from_str(&read(path)?)?;
            return file.to_module_over(op);
        }
        Err(Error::UnknownName(format!(
            "right module {name}; use A, D(NAME) or a file"
        )))
    }

    fn complex(&self, name: &str) -> Result<ChainComplex> {
        let path = Path::new(name);
        if path.is_file() {
            let file: ComplexFile = serde_json::from_str(&read(path)?)?;
            let x = file.to_complex()?;
            if !x.algebra().same_table(&self.alg) {
                return Err(Error::AlgebraMismatch);
            }
            return Ok(x);
        }
        match name {
            "random" => Ok(random_complex(&mut rng(self.g.seed), &self.alg, 0, 3, 4)),
            "random-exact" => Ok(random_exact_complex(
                &mut rng(self.g.seed),
                &self.alg,
                0,
                3,
                5,
            )),
            _ => match self.universe(None)?.get(name) {
                Some(Object::Complex(x)) => Ok(x.clone()),
                _ => Err(Error::UnknownName(format!("complex {name}"))),
            },
        }
    }

    fn universe(&self, name: Option<&str>) -> Result<Universe> {
        let alg = self.alg.name();
        let Some(name) = name else {
            return library::universe(alg).or_else(|_| library::module_universe(alg));
        };
        let path = Path::new(name);
        if path.is_file() {
            let file: UniverseFile = serde_json::from_str(&read(path)?)?;
            let stem = path
                .file_stem()
                .map_or(name.into(), |s| s.to_string_lossy().into_owned());
            return Universe::from_file(stem, &file);
        }
        match name.strip_suffix("-modules") {
            Some(a) => library::module_universe(a),
            None if name == "modules" => library::module_universe(alg),
            None => library::universe(name),
        }
    }

    fn class(&self, s: &str) -> Result<ClassSpec> {
        ClassSpec::parse_with(s, &|u| self.universe(Some(u)))
    }

    fn selector(&self, s: &str) -> Result<Selector> {
        match s.trim().strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            Some(list) => Ok(Selector::Names(
                list.split(',')
                    .map(str::trim)
                    .filter(|x| !x.is_empty())
                    .map(String::from)
                    .collect(),
            )),
            None => Ok(Selector::Spec(self.class(s)?)),
        }
    }

    fn vectors(&self, s: &str, dim: usize) -> Result<Vec<Vec<u32>>> {
        let p = i64::from(self.alg.field().p());
        s.split(';')
            .map(|row| {
                let v = row
                    .split(',')
                    .map(|c| {
                        c.trim()
                            .parse::<i64>()
                            .map(|x| x.rem_euclid(p) as u32)
                            .map_err(|_| Error::MalformedSpec(format!("bad coordinate `{c}`")))
                    })
                    .collect::<Result<Vec<u32>>>()?;
                if v.len() != dim {
                    return Err(Error::DimensionMismatch(format!(
                        "vector of length {} in dimension {dim}",
                        v.len()
                    )));
                }
                Ok(v)
            })
            .collect()
    }

    fn seed_submodule(&self, m: &Module, generators: Option<&str>) -> Result<crate::Subspace> {
        if m.dim() == 0 {
            return Err(Error::Precondition("module is zero".into()));
        }
        let gens = match generators {
            Some(s) => self.vectors(s, m.dim())?,
            None => vec![crate::subspace::unit_vec(m.dim(), 0)],
        };
        Ok(m.submodule_generated(gens.iter()))
    }

    fn write(&self, file: &str, body: &str) -> Result<PathBuf> {
        std::fs::create_dir_all(&self.g.out_dir)?;
        let path = self.g.out_dir.join(file);
        std::fs::write(&path, format!("{}\n", body.trim_end()))?;
        Ok(path)
    }

    fn write_cert(&self, stem: &str, cert: &Certificate) -> Result<PathBuf> {
        self.write(
            &format!("{}-{}.json", cert.kind(), label(stem)),
            &cert.to_json(),
        )
    }
}

/// File-name-safe label for a name or path argument.
fn label(name: &str) -> String {
    let stem = Path::new(name)
        .file_stem()
        .map_or(name.into(), |s| s.to_string_lossy().into_owned());
    stem.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn verdict(m: &Membership) -> String {
    format!(
        "{} ({})",
        if m.member { "yes" } else { "no" },
        m.witness.join("; ")
    )
}

fn same_map(a: &ChainMap, b: &ChainMap) -> bool {
    let lo = a.source().lo().min(b.source().lo());
    let hi = a.source().hi().max(b.source().hi());
    (lo..=hi).all(|m| a.component(m) == b.component(m))
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    if let Command::CheckCert { files } = &cli.command {
        return check_cert(files);
    }
    if let Command::Validate { files } = &cli.command {
        return validate(g, files);
    }
    let alg = load_algebra(g)?;
    let exec = if g.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    let ctx = Ctx { g, alg, exec };
    let alg_name = ctx.alg.name().to_string();
    match &cli.command {
        Command::Validate { .. } | Command::CheckCert { .. } => unreachable!("handled above"),
        Command::Pd { module, cutoff } => {
            let m = ctx.module(module)?;
            let d = proj_dim(&m, *cutoff).ok_or(Error::ExceedsCutoff(*cutoff))?;
            Ok(Outcome::new(
                d.to_string(),
                json!({ "algebra": alg_name, "module": module, "pd": d }),
                true,
            ))
        }
        Command::Fd {
            module,
            cutoff,
            test_dim,
        } => {
            let m = ctx.module(module)?;
            let tests = match test_dim {
                Some(d) => right_test_modules(&ctx.alg, *d),
                None => default_flat_tests(&ctx.alg),
            };
            let d = flat_dim(&m, *cutoff, &tests)?.ok_or(Error::ExceedsCutoff(*cutoff))?;
            let v = json!({ "algebra": alg_name, "module": module, "fd": d, "tests": tests.len() });
            Ok(Outcome::new(d.to_string(), v, true))
        }
        Command::Ext {
            module,
            other,
            degree,
        } => {
            let d = ext_dim(&ctx.module(module)?, &ctx.module(other)?, *degree)?;
            let v = json!({ "algebra": alg_name, "module": module, "other": other, "degree": degree, "dim": d });
            Ok(Outcome::new(d.to_string(), v, true))
        }
        Command::Tor {
            right,
            module,
            degree,
        } => {
            let d = tor_dim(&ctx.right_module(right)?, &ctx.module(module)?, *degree)?;
            let v = json!({ "algebra": alg_name, "right": right, "module": module, "degree": degree, "dim": d });
            Ok(Outcome::new(d.to_string(), v, true))
        }
        Command::Resolve { module, length } => {
            let m = ctx.module(module)?;
            let res = projective_resolution(&m, *length)?;
            let data = resolution_data(&res);
            let path = ctx.write(
                &format!("resolution-{}.json", label(module)),
                &serde_json::to_string_pretty(&data)?,
            )?;
            let dims: Vec<Vec<usize>> = data
                .terms
                .iter()
                .map(|t| t.iter().map(|s| s.dim).collect())
                .collect();
            let mut text = String::new();
            for (k, d) in dims.iter().enumerate() {
                let _ = writeln!(text, "P_{k}: summands {d:?}");
            }
            let _ = write!(
                text,
                "length {}, written to {}",
                res.length(),
                path.display()
            );
            let v = json!({ "algebra": alg_name, "module": module, "length": res.length(), "summand_dims": dims, "artifact": path });
            Ok(Outcome::new(text, v, true))
        }
        Command::Zigzag {
            module,
            n,
            generators,
        } => {
            let m = ctx.module(module)?;
            let seed = ctx.seed_submodule(&m, generators.as_deref())?;
            let res = projective_resolution(&m, *n)
                .map_err(|_| Error::NotInClass(format!("{module} is not in P_{n}")))?;
            let z = zigzag_subresolution(&res, &seed, g.kappa)?;
            let path = ctx.write_cert(module, &Certificate::subresolution(&z))?;
            let text = format!(
                "seed dim {}, N' dim {}, term dims {:?}, rounds {}\ncertificate {}",
                z.seed.dim(),
                z.sub_target.dim(),
                z.term_dims(),
                z.rounds,
                path.display()
            );
            let v = json!({
                "algebra": alg_name, "module": module, "seed_dim": z.seed.dim(), "sub_dim": z.sub_target.dim(),
                "term_dims": z.term_dims(), "rounds": z.rounds, "certificate": path,
            });
            Ok(Outcome::new(text, v, true))
        }
        Command::FiltrateModule { module, n } => {
            let m = ctx.module(module)?;
            let f = module_filtration(&m, *n, g.kappa)?;
            let path = ctx.write_cert(module, &Certificate::module_filtration(&f, g.mode))?;
            let chain: Vec<usize> = f.chain().iter().map(|s| s.dim()).collect();
            let quotients: Vec<usize> = f.steps.iter().map(|s| s.quotient.dim()).collect();
            let text = format!(
                "chain dims {chain:?}, quotient dims {quotients:?}\ncertificate {}",
                path.display()
            );
            let v = json!({ "algebra": alg_name, "module": module, "chain": chain, "quotients": quotients, "certificate": path });
            Ok(Outcome::new(text, v, true))
        }
        Command::DwFiltrate { complex, n } | Command::ExFiltrate { complex, n } => {
            let x = ctx.complex(complex)?;
            let (f, kind) = match &cli.command {
                Command::DwFiltrate { .. } => (dw_filtration(&x, *n, g.kappa)?, "dw"),
                _ => (ex_filtration(&x, *n, g.kappa)?, "ex"),
            };
            let path = ctx.write_cert(
                &format!("{kind}-{complex}"),
                &Certificate::complex_filtration(&f),
            )?;
            let quotients: Vec<Vec<usize>> = f.steps.iter().map(|s| s.quotient.dims()).collect();
            let text = format!(
                "{} steps on dims {:?}, quotient dims {quotients:?}\ncertificate {}",
                f.steps.len(),
                x.dims(),
                path.display()
            );
            let v = json!({
                "algebra": alg_name, "complex": complex, "class": kind, "dims": x.dims(),
                "quotients": quotients, "certificate": path,
            });
            Ok(Outcome::new(text, v, true))
        }
        Command::Staircase {
            complex,
            track,
            schedule,
            n,
            degree,
            element,
        } => {
            let x = ctx.complex(complex)?;
            let (deg, v) = match (degree, element) {
                (Some(d), Some(e)) => (*d, ctx.vectors(e, x.dim(*d))?.remove(0)),
                (Some(d), None) if x.dim(*d) > 0 => (*d, crate::subspace::unit_vec(x.dim(*d), 0)),
                (Some(d), None) => {
                    return Err(Error::Precondition(format!("degree {d} has a zero term")))
                }
                (None, Some(_)) => {
                    return Err(Error::MalformedSpec("--element needs --degree".into()))
                }
                (None, None) => random_element(&mut rng(g.seed.wrapping_add(1)), &x)
                    .ok_or_else(|| Error::Precondition("complex is zero".into()))?,
            };
            let opts = StaircaseOptions {
                track: *track,
                schedule: schedule.clone(),
                kappa: g.kappa,
                n: *n,
                ..Default::default()
            };
            let s = staircase(&x, deg, &v, &opts)?;
            let path = ctx.write_cert(
                &format!("{track}-{complex}"),
                &Certificate::staircase(&s, g.mode),
            )?;
            let noetherian = if s.audit.noetherian.is_empty() {
                "none".into()
            } else {
                s.audit.noetherian.join(", ")
            };
            let text = format!(
                "element {v:?} in degree {deg}\nsubcomplex dims {:?}, card {} of budget {}, {} ladder steps\nnoetherian steps: {noetherian}\ncertificate {}",
                s.sub.dims(),
                s.card(),
                s.budget(),
                s.ladder.len(),
                path.display()
            );
            let j = json!({
                "algebra": alg_name, "complex": complex, "track": track, "degree": deg, "element": v,
                "dims": s.sub.dims(), "card": s.card(), "budget": s.budget(), "ladder_steps": s.ladder.len(),
                "audit": s.audit, "certificate": path,
            });
            Ok(Outcome::new(text, j, s.audit.passes()))
        }
        Command::PureClosure {
            module,
            generators,
            test_dim,
        } => {
            let m = ctx.module(module)?;
            let s0 = ctx.seed_submodule(&m, generators.as_deref())?;
            let tests = right_test_modules(&ctx.alg, *test_dim);
            let pc = pure_closure(&s0, &m, g.kappa, Some(&tests))?;
            let path = ctx.write_cert(module, &Certificate::pure_closure(&m, &pc, g.kappa))?;
            let text = format!(
                "seed dim {}, closure dim {}, pure against {} test modules: {}\ncertificate {}",
                s0.dim(),
                pc.sub.dim(),
                tests.len(),
                pc.is_pure(),
                path.display()
            );
            let v = json!({
                "algebra": alg_name, "module": module, "seed_dim": s0.dim(), "dim": pc.sub.dim(),
                "tests": tests.len(), "pure": pc.is_pure(), "certificate": path,
            });
            Ok(Outcome::new(text, v, pc.is_pure()))
        }
        Command::CheckCotorsion { a, b, universe } => {
            let u = ctx.universe(universe.as_deref())?;
            let r = check_cotorsion_pair(&ctx.selector(a)?, &ctx.selector(b)?, &u, ctx.exec)?;
            let pick = |rows: &[crate::cotorsion::MemberRow]| -> Vec<String> {
                rows.iter()
                    .filter(|r| r.member)
                    .map(|r| r.name.clone())
                    .collect()
            };
            let mut text = format!(
                "universe {} ({} objects)\nA = {}: {:?}\nB = {}: {:?}\n",
                r.universe,
                u.len(),
                r.a_spec,
                pick(&r.a_rows),
                r.b_spec,
                pick(&r.b_rows)
            );
            for v in &r.violations {
                let _ = writeln!(
                    text,
                    "violation: Ext^1({}, {}) has dimension {}",
                    v.a, v.b, v.ext_dim
                );
            }
            if !r.b_gaps.is_empty() {
                let _ = writeln!(
                    text,
                    "not selected, though in the right perp of A: {:?}",
                    r.b_gaps
                );
            }
            if !r.a_gaps.is_empty() {
                let _ = writeln!(
                    text,
                    "not selected, though in the left perp of B: {:?}",
                    r.a_gaps
                );
            }
            let _ = write!(
                text,
                "{}",
                if r.clean {
                    "clean: A and B are Ext-orthogonal"
                } else {
                    "violations found"
                }
            );
            Ok(Outcome::new(text, serde_json::to_value(&r)?, r.clean))
        }
        Command::CheckCompat { class, universe } => {
            let u = ctx.universe(universe.as_deref())?;
            let r = check_compatibility(&ctx.class(class)?, &u, ctx.exec)?;
            let text = format!(
                "universe {} ({} objects), inner class {}\nrperp(dw): {:?}\nrperp(ex) & E: {:?}\n{}",
                r.universe,
                u.len(),
                r.inner,
                r.lhs,
                r.rhs,
                if r.holds { "identity holds" } else { "identity fails" }
            );
            Ok(Outcome::new(text, serde_json::to_value(&r)?, r.holds))
        }
        Command::CheckThick { class, samples } => {
            let spec = ctx.class(class)?;
            let mut r = rng(g.seed);
            let mut seqs = Vec::new();
            let mut retracts = Vec::new();
            for i in 0..*samples {
                let (x, y) = if i % 2 == 0 {
                    (
                        random_exact_complex(&mut r, &ctx.alg, 0, 2, 3),
                        random_exact_complex(&mut r, &ctx.alg, 0, 2, 3),
                    )
                } else {
                    (
                        random_complex(&mut r, &ctx.alg, 0, 2, 3),
                        random_complex(&mut r, &ctx.alg, 0, 2, 3),
                    )
                };
                seqs.push(random_complex_extension(&mut r, &x, &y));
                retracts.push(Retract::summand(&x, &y));
            }
            let rep = check_thick(&spec, &seqs, &retracts)?;
            let bad: Vec<String> = rep
                .rows
                .iter()
                .filter(|r| !r.ok)
                .map(|r| format!("{:?} {}: {}", r.kind, r.index, r.witness))
                .collect();
            let mut text = format!(
                "class {}: {} sequences, {} retracts checked\n",
                rep.class,
                seqs.len(),
                retracts.len()
            );
            for b in &bad {
                let _ = writeln!(text, "failure: {b}");
            }
            let _ = write!(
                text,
                "{}",
                if rep.clean {
                    "clean"
                } else {
                    "not thick on these samples"
                }
            );
            Ok(Outcome::new(text, serde_json::to_value(&rep)?, rep.clean))
        }
        Command::Approx {
            object,
            a,
            b,
            universe,
            side,
        } => {
            let u = ctx.universe(universe.as_deref())?;
            let obj = match u.get(object) {
                Some(o) => o.clone(),
                None => match ctx.module(object) {
                    Ok(m) => Object::Module(m),
                    Err(_) => Object::Complex(ctx.complex(object)?),
                },
            };
            let ap = approx_search(&obj, &ctx.class(a)?, &ctx.class(b)?, &u, *side)?;
            let ok = ap.a_membership.member && ap.b_membership.member;
            let text = format!(
                "source {:?} after {} candidates\nA-term size {}: {}\nB-term size {}: {}{}",
                ap.source,
                ap.searched,
                ap.a_term().size(),
                verdict(&ap.a_membership),
                ap.b_term().size(),
                verdict(&ap.b_membership),
                if ap.b_relative {
                    " (relative to the universe)"
                } else {
                    ""
                }
            );
            let v = json!({
                "object": object, "side": side, "source": ap.source, "searched": ap.searched,
                "a_size": ap.a_term().size(), "b_size": ap.b_term().size(),
                "a_membership": ap.a_membership, "b_membership": ap.b_membership, "b_relative": ap.b_relative,
            });
            Ok(Outcome::new(text, v, ok))
        }
        Command::Lift {
            count,
            obstructed,
            a,
            b,
        } => {
            let (ca, cb) = (ctx.class(a)?, ctx.class(b)?);
            let ids: Vec<u64> = (0..*count as u64).collect();
            let rows = ctx.exec.map(&ids, |&i| -> Result<Value> {
                let mut r = rng(g.seed.wrapping_add(i));
                let p = if *obstructed {
                    obstructed_lifting_problem(&mut r, &ctx.alg)
                } else {
                    random_lifting_problem(&mut r, &ctx.alg)
                };
                let rep = lift(&p, &ca, &cb)?;
                let verified = rep.diagonal.as_ref().map(|d| same_map(&d.compose(&p.i), &p.u) && same_map(&p.p.compose(d), &p.v));
                let ok = if *obstructed { rep.diagonal.is_none() } else { verified == Some(true) };
                Ok(json!({
                    "index": i, "lifted": rep.diagonal.is_some(), "verified": verified, "obstruction_dim": rep.obstruction_dim,
                    "cokernel_in_a": rep.cokernel_membership.member, "kernel_in_b": rep.kernel_membership.member, "ok": ok,
                }))
            });
            let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
            let good = rows.iter().filter(|r| r["ok"] == true).count();
            let lifted = rows.iter().filter(|r| r["lifted"] == true).count();
            let kind = if *obstructed {
                "obstructed"
            } else {
                "constructed"
            };
            let text =
                format!("{kind} squares: {lifted}/{count} lifted, {good}/{count} as expected");
            let v = json!({ "kind": kind, "a": a, "b": b, "count": count, "lifted": lifted, "expected": good, "rows": rows });
            Ok(Outcome::new(text, v, good == *count))
        }
        Command::Factor {
            map,
            source,
            target,
            universe,
            n,
            dual,
        } => {
            let u = ctx.universe(universe.as_deref())?;
            let f = match map {
                Some(path) => {
                    let file: ChainMapFile = serde_json::from_str(&read(path)?)?;
                    file.to_map()?
                }
                None => {
                    let names: Vec<String> = u
                        .objects
                        .iter()
                        .filter(|(_, o)| o.as_complex().is_some())
                        .map(|(n, _)| n.clone())
                        .collect();
                    if names.is_empty() {
                        return Err(Error::UnsupportedSpec(
                            "factor needs a universe of complexes".into(),
                        ));
                    }
                    let mut r = rng(g.seed);
                    let pick = |given: &Option<String>,
                                r: &mut crate::random::Rng64|
                     -> Result<ChainComplex> {
                        use rand::Rng;
                        let name = given
                            .clone()
                            .unwrap_or_else(|| names[r.gen_range(0..names.len())].clone());
                        match u.get(&name) {
                            Some(Object::Complex(x)) => Ok(x.clone()),
                            _ => Err(Error::UnknownName(format!("complex {name} in {}", u.name))),
                        }
                    };
                    let x = pick(source, &mut r)?;
                    let y = pick(target, &mut r)?;
                    random_chain_map(&mut r, &x, &y)
                }
            };
            let pairs = ModelPairs::dw_projective(*n, &u)?;
            let fac = factor_map(&f, &pairs, &u, *dual)?;
            let agrees = fac.composite_agrees(&f);
            let ok = agrees
                && fac.i.is_injective()
                && fac.p.is_surjective()
                && fac.cokernel_membership.member
                && fac.kernel_membership.member;
            let text = format!(
                "f: {:?} -> {:?}\nmiddle dims {:?}, p i = f: {agrees}\ncoker i: {}\nker p: {}",
                f.source().dims(),
                f.target().dims(),
                fac.middle().dims(),
                verdict(&fac.cokernel_membership),
                verdict(&fac.kernel_membership)
            );
            let v = json!({
                "dual": dual, "source": f.source().dims(), "target": f.target().dims(), "middle": fac.middle().dims(),
                "composite_agrees": agrees, "cokernel": fac.cokernel_membership, "kernel": fac.kernel_membership,
                "approximations": fac.approximations,
            });
            Ok(Outcome::new(text, v, ok))
        }
        Command::Demo => demo(&ctx),
    }
}

fn check_cert(files: &[PathBuf]) -> Result<Outcome> {
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut ok = true;
    for path in files {
        let body = read(path)?;
        Certificate::from_json(&body)
            .map_err(|e| Error::MalformedSpec(format!("{}: {e}", path.display())))?;
        match check_json(&body) {
            Ok(v) => {
                let _ = writeln!(
                    text,
                    "{}: ok, {} ({} checks)",
                    path.display(),
                    v.kind,
                    v.checks
                );
                rows.push(json!({ "file": path, "ok": true, "kind": v.kind, "checks": v.checks }));
            }
            Err(Failure { location, reason }) => {
                ok = false;
                let _ = writeln!(text, "{}: FAIL at {location}: {reason}", path.display());
                rows.push(
                    json!({ "file": path, "ok": false, "location": location, "reason": reason }),
                );
            }
        }
    }
    Ok(Outcome::new(text, json!({ "results": rows }), ok))
}

/// Loads one data file, guessing its kind from the top-level keys. Parse
/// errors are input errors; failed invariants are violations.
fn validate_file(path: &Path, g: &Global) -> Result<(String, std::result::Result<(), String>)> {
    let body = read(path)?;
    let v: Value = serde_json::from_str(&body)?;
    let has = |k: &str| v.get(k).is_some();
    let as_violation = |r: Result<()>| r.map_err(|e| e.to_string());
    if has("format") && has("witness") {
        return Ok((
            "certificate".into(),
            check_json(&body).map(|_| ()).map_err(|f| f.to_string()),
        ));
    }
    if has("objects") {
        let file: UniverseFile = serde_json::from_value(v)?;
        return Ok((
            "universe".into(),
            as_violation(Universe::from_file("file", &file).map(|_| ())),
        ));
    }
    if has("components") {
        let file: ChainMapFile = serde_json::from_value(v)?;
        return Ok(("chain map".into(), as_violation(file.to_map().map(|_| ()))));
    }
    if has("boundaries") {
        let file: ComplexFile = serde_json::from_value(v)?;
        return Ok((
            "complex".into(),
            as_violation(file.to_complex().map(|_| ())),
        ));
    }
    if has("mul") {
        let spec: AlgebraSpec = serde_json::from_value(v)?;
        return Ok((
            "algebra".into(),
            as_violation(Algebra::load_with_cap(&spec, g.prime_cap).and_then(|a| a.validate())),
        ));
    }
    if has("action") {
        let file: ModuleFile = serde_json::from_value(v)?;
        return Ok(("module".into(), as_violation(file.to_module().map(|_| ()))));
    }
    let lib: ModuleLibraryFile = serde_json::from_value(v)?;
    let r = lib
        .iter()
        .try_for_each(|(n, f)| f.to_module().map(|_| ()).map_err(|e| format!("{n}: {e}")));
    Ok(("module library".into(), r))
}

fn validate(g: &Global, files: &[PathBuf]) -> Result<Outcome> {
    let mut rows: Vec<(String, String, std::result::Result<(), String>)> = Vec::new();
    if files.is_empty() {
        for name in library::algebra_names() {
            let r = library::algebra(name).and_then(|a| a.validate());
            rows.push(("algebra".into(), name.into(), r.map_err(|e| e.to_string())));
            if let Ok(mods) = library::module_names(name) {
                for m in mods {
                    let r = library::module(name, &m).and_then(|x| x.validate());
                    rows.push((
                        "module".into(),
                        format!("{name}/{m}"),
                        r.map_err(|e| e.to_string()),
                    ));
                }
            }
        }
        for name in library::universe_names() {
            let r = library::universe(name).and_then(|u| u.validate());
            rows.push(("universe".into(), name.into(), r.map_err(|e| e.to_string())));
        }
    } else {
        for path in files {
            let (kind, r) = validate_file(path, g)?;
            rows.push((kind, path.display().to_string(), r));
        }
    }
    let mut text = String::new();
    for (kind, name, r) in &rows {
        match r {
            Ok(()) => writeln!(text, "ok    {kind} {name}"),
            Err(e) => writeln!(text, "FAIL  {kind} {name}: {e}"),
        }
        .expect("string write");
    }
    let ok = rows.iter().all(|(_, _, r)| r.is_ok());
    let json_rows: Vec<Value> = rows
        .iter()
        .map(
            |(k, n, r)| json!({ "kind": k, "name": n, "ok": r.is_ok(), "error": r.as_ref().err() }),
        )
        .collect();
    Ok(Outcome::new(text, json!({ "results": json_rows }), ok))
}

struct DemoRow {
    algebra: String,
    step: String,
    result: String,
    ok: bool,
}

fn demo(ctx: &Ctx<'_>) -> Result<Outcome> {
    let mut rows = Vec::new();
    for (name, n) in [("T2F2", 1usize), ("NAK3", 2)] {
        demo_algebra(ctx, name, n, &mut rows)?;
    }
    let width = rows.iter().map(|r| r.step.len()).max().unwrap_or(4).max(4);
    let mut text = format!("{:<6} {:<width$} {:<6} result\n", "alg", "step", "status");
    for r in &rows {
        let status = if r.ok { "PASS" } else { "FAIL" };
        let _ = writeln!(
            text,
            "{:<6} {:<width$} {:<6} {}",
            r.algebra, r.step, status, r.result
        );
    }
    let passed = rows.iter().filter(|r| r.ok).count();
    let _ = write!(text, "{passed}/{} checks passed", rows.len());
    let json_rows: Vec<Value> = rows
        .iter()
        .map(|r| json!({ "algebra": r.algebra, "step": r.step, "result": r.result, "ok": r.ok }))
        .collect();
    Ok(Outcome::new(
        text,
        json!({ "rows": json_rows, "passed": passed, "total": rows.len() }),
        passed == rows.len(),
    ))
}

fn demo_algebra(ctx: &Ctx<'_>, name: &str, n: usize, rows: &mut Vec<DemoRow>) -> Result<()> {
    let alg = library::algebra(name)?;
    let modules = library::modules(name)?;
    let mut push = |step: &str, result: String, ok: bool| {
        rows.push(DemoRow {
            algebra: name.into(),
            step: step.into(),
            result,
            ok,
        });
    };
    let pds: Vec<String> = modules
        .iter()
        .map(|(m, x)| {
            format!(
                "{m}={}",
                proj_dim(x, 8).map_or("inf".into(), |d| d.to_string())
            )
        })
        .collect();
    push("projective dimensions", pds.join(" "), true);

    let oracle = ext_oracle_table(&modules, ctx.exec);
    let agree = oracle.iter().filter(|r| r.agrees(alg.field().p())).count();
    push(
        "Ext^1 against class count",
        format!("{agree}/{} pairs agree", oracle.len()),
        agree == oracle.len(),
    );

    let mut certs: Vec<(String, Certificate)> = Vec::new();
    for (m, x) in &modules {
        if proj_dim(x, n).is_some() {
            certs.push((
                format!("{name}-{m}"),
                Certificate::module_filtration(&module_filtration(x, n, ctx.g.kappa)?, ctx.g.mode),
            ));
        }
    }
    let mut r = rng(ctx.g.seed);
    let x = random_complex(&mut r, &alg, 0, 3, 4);
    certs.push((
        format!("{name}-dw"),
        Certificate::complex_filtration(&dw_filtration(&x, n, 6)?),
    ));
    let e = random_exact_complex(&mut r, &alg, 0, 3, 5);
    certs.push((
        format!("{name}-ex"),
        Certificate::complex_filtration(&ex_filtration(&e, n, 6)?),
    ));
    let (deg, v) =
        random_element(&mut r, &e).ok_or_else(|| Error::Precondition("zero complex".into()))?;
    for track in [Track::Projective, Track::Flat] {
        let opts = StaircaseOptions {
            track,
            kappa: ctx.g.kappa,
            n,
            ..Default::default()
        };
        let s = staircase(&e, deg, &v, &opts)?;
        certs.push((
            format!("{name}-{track}"),
            Certificate::staircase(&s, ctx.g.mode),
        ));
    }
    let sub = ctx.g.out_dir.join("demo");
    std::fs::create_dir_all(&sub)?;
    let mut passed = 0;
    for (stem, c) in &certs {
        let body = c.to_json();
        std::fs::write(
            sub.join(format!("{}-{stem}.json", c.kind())),
            format!("{body}\n"),
        )?;
        passed += usize::from(check_json(&body).is_ok());
    }
    push(
        "certificates checked",
        format!(
            "{passed}/{} verified, written to {}",
            certs.len(),
            sub.display()
        ),
        passed == certs.len(),
    );

    if let Ok(u) = library::universe(name) {
        let c = check_compatibility(&ClassSpec::pn(n), &u, ctx.exec)?;
        push(
            "compatibility identity",
            format!("{} objects, both sides {:?}", u.len(), c.lhs),
            c.holds,
        );
        let pairs = ModelPairs::dw_projective(n, &u)?;
        let names: Vec<&String> = u.objects.iter().map(|(n, _)| n).collect();
        let (src, tgt) = (names[0], names[names.len() - 1]);
        if let (Some(Object::Complex(a)), Some(Object::Complex(b))) = (u.get(src), u.get(tgt)) {
            let f = random_chain_map(&mut r, a, b);
            let fac = factor_map(&f, &pairs, &u, false)?;
            let ok = fac.composite_agrees(&f)
                && fac.cokernel_membership.member
                && fac.kernel_membership.member;
            push(
                "factorization",
                format!("{src} -> {tgt} through dims {:?}", fac.middle().dims()),
                ok,
            );
        }
    }
    let squares: Vec<bool> = (0..10u64)
        .map(|i| {
            let p = random_lifting_problem(&mut rng(ctx.g.seed.wrapping_add(i)), &alg);
            lift(&p, &ClassSpec::dw(ClassSpec::pn(0)), &ClassSpec::exact())
                .map(|r| r.diagonal.is_some())
        })
        .collect::<Result<_>>()?;
    let lifted = squares.iter().filter(|&&b| b).count();
    push(
        "lifting squares",
        format!("{lifted}/{} constructed squares lift", squares.len()),
        lifted == squares.len(),
    );
    let in_p = modules
        .iter()
        .filter(|(_, x)| {
            class_member(&Object::Module(x.clone()), &ClassSpec::pn(n)).map_or(false, |m| m.member)
        })
        .count();
    push(
        "class membership",
        format!("{in_p}/{} bundled modules in P{n}", modules.len()),
        true,
    );
    Ok(())
}
