//! Command-line front end. Every command prints `key: value` lines and a
//! final `status:` line; the exit code is 0 on success, 1 when a stated
//! relation fails or a value could not be certified, and 2 on input errors.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::catalog::{verify_all, Bounds, Catalog, Filter};
use crate::determinator::{
    classify_function_with, hessian_corank, milnor_number_reduced, perp, reduce_one_variable_sk, reduce_one_variable_sq,
    simple_dimension_cases, ConstMatrix, SingClass,
};
use crate::error::{Error, Result};
use crate::family::{check_certificate, parse_ops, stable_split, EquivalenceCertificate, Kind, MatrixFamily, PolyMatrix};
use crate::localalg::DEFAULT_MAX_DEGREE;
use crate::parse::{collect_identifiers, parse_poly};
use crate::ring::{roster, Monomial, Rational};
use crate::suspend::{suspend, tau_relation_report, SuspensionKind, Verdict};
use crate::tangent::{describe_direction, miniversal, tau};

#[derive(Parser, Debug)]
#[command(name = "matgerm", version, about = "Exact invariants of germs of matrix families")]
struct Cli {
    /// Degree cutoff for truncated computations; exact results ignore it.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_DEGREE)]
    max_degree: u32,
    #[command(subcommand)]
    command: Command,
}

/// A family file, or `-` for standard input.
#[derive(Args, Debug)]
struct Input {
    file: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tjurina number and miniversal deformation.
    Tau(Input),
    /// Determinant.
    Det(Input),
    /// Pfaffian of a skew family.
    Pf(Input),
    /// Corank of M(0) and the stable splitting.
    Corank(Input),
    /// Weights making the family quasi-homogeneous.
    Weights(Input),
    /// Singularity class of a function, or of det / Pf of a family.
    ClassifyFn {
        /// Polynomial expression.
        expr: Option<String>,
        /// Variable order (defaults to order of appearance).
        #[arg(long)]
        vars: Option<String>,
        /// Classify the determinant (Pfaffian for skew) of this family instead.
        #[arg(long, value_name = "FILE", conflicts_with = "expr")]
        of: Option<PathBuf>,
    },
    /// Suspension of a family.
    Suspend {
        #[arg(long = "type", value_name = "KIND")]
        kind: SuspensionKind,
        file: PathBuf,
    },
    /// Tjurina numbers of a family and its suspension against the stated relation.
    Relations {
        #[arg(long = "type", value_name = "KIND")]
        kind: SuspensionKind,
        file: PathBuf,
    },
    /// Normal form of a one-variable square or skew family.
    Reduce1 {
        file: PathBuf,
        /// Series precision for non-polynomial reductions.
        #[arg(long, default_value_t = 24)]
        trunc: u32,
    },
    /// Skew matrices orthogonal to the linear part of a skew family.
    Perp(Input),
    /// Dimension predicate for skew families: s parameters, 2k x 2k, rank r.
    Dims {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
    },
    /// Applies row/column operations and checks the resulting certificate.
    Certify {
        file: PathBuf,
        /// Operations, e.g. "T(1,2,x); rows:Scale(2,1+y)".
        #[arg(long)]
        ops: String,
        /// Family the operations are claimed to produce.
        #[arg(long, value_name = "FILE")]
        against: Option<PathBuf>,
    },
    /// The registry of simple normal forms.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Args, Debug, Clone)]
struct CatalogFilter {
    #[arg(long)]
    kind: Option<Kind>,
    /// Substring of the source description.
    #[arg(long)]
    source: Option<String>,
    /// Prefix of the entry id.
    #[arg(long)]
    id: Option<String>,
    /// Parameter bounds on top of the defaults, e.g. p=4,q=4,mu=10,a=3,k=3.
    #[arg(long)]
    bounds: Option<String>,
}

#[derive(Subcommand, Debug)]
enum CatalogCommand {
    List(CatalogFilter),
    Verify(CatalogFilter),
}

/// Outcome of a command before it is printed.
struct Report {
    lines: Vec<String>,
    status: &'static str,
    code: i32,
}

impl Report {
    fn new() -> Self {
        Report {
            lines: Vec::new(),
            status: "OK",
            code: 0,
        }
    }

    fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        self.lines.push(format!("{key}: {value}"));
    }

    fn raw(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    fn fail(&mut self, status: &'static str) {
        self.status = status;
        self.code = 1;
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(stdout, "{e}")
            } else {
                write!(stderr, "{e}")
            };
            return code;
        }
    };
    match execute(&cli, stdin) {
        Ok(report) => {
            for line in &report.lines {
                let _ = writeln!(stdout, "{line}");
            }
            let _ = writeln!(stdout, "status: {}", report.status);
            report.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            let _ = writeln!(stdout, "status: ERROR");
            2
        }
    }
}

fn read_input(path: &PathBuf, stdin: &mut dyn Read) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s).map_err(|e| Error::Io(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }
}

fn read_family(path: &PathBuf, stdin: &mut dyn Read) -> Result<MatrixFamily> {
    MatrixFamily::parse(&read_input(path, stdin)?)
}

fn format_const(m: &ConstMatrix) -> String {
    m.iter()
        .map(|row| format!("[{}]", row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
        .collect::<Vec<_>>()
        .join("; ")
}

fn format_matrix(m: &PolyMatrix) -> String {
    m.rows()
        .iter()
        .map(|row| format!("[{}]", row.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")))
        .collect::<Vec<_>>()
        .join("; ")
}

fn family_lines(r: &mut Report, m: &MatrixFamily) {
    for line in m.to_file_string().lines() {
        r.raw(line);
    }
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<Report> {
    let max_degree = cli.max_degree;
    let mut r = Report::new();
    match &cli.command {
        Command::Tau(input) => {
            let m = read_family(&input.file, stdin)?;
            r.kv("kind", m.kind());
            r.kv("size", m.size());
            match m.find_weights() {
                Some(w) => r.kv("weights", w),
                None => r.kv("weights", "none"),
            }
            let q = tau(&m, max_degree)?;
            r.kv("tau", q.codim);
            r.kv("exactness", q.exactness);
            r.kv("stabilized-at", &q.stabilized_at);
            if q.value().is_some() {
                let d = miniversal(&m, max_degree)?;
                let basis: Vec<String> = d
                    .directions
                    .iter()
                    .map(|dir| describe_direction(dir, m.kind(), m.vars()))
                    .collect();
                r.kv("basis", basis.join("; "));
                r.kv("miniversal", &d);
            } else {
                r.fail("UNDETERMINED");
            }
        }
        Command::Det(input) => {
            let m = read_family(&input.file, stdin)?;
            r.kv("det", m.determinant());
        }
        Command::Pf(input) => {
            let m = read_family(&input.file, stdin)?;
            r.kv("pf", m.pfaffian()?);
        }
        Command::Corank(input) => {
            let m = read_family(&input.file, stdin)?;
            r.kv("corank", m.matrix_corank());
            let split = stable_split(&m);
            r.kv("core-size", split.core.size());
            r.kv("core", format_matrix(split.core.matrix()));
            r.kv("unit-part", format_matrix(split.corner.matrix()));
            r.kv(
                "ops",
                split.ops.iter().map(|o| o.to_string()).collect::<Vec<_>>().join("; "),
            );
            let ok = check_certificate(&split.split_form(), &m, &split.certificate)?;
            r.kv("certificate", if ok { "VALID" } else { "INVALID" });
            if !ok {
                r.fail("FAIL");
            }
        }
        Command::Weights(input) => {
            let m = read_family(&input.file, stdin)?;
            match m.find_weights() {
                Some(w) => r.kv("weights", w),
                None => {
                    r.kv("weights", "none");
                    r.fail("NONE");
                }
            }
        }
        Command::ClassifyFn { expr, vars, of } => {
            let f = match (expr, of) {
                (_, Some(path)) => {
                    let m = read_family(path, stdin)?;
                    if m.kind() == Kind::Sk {
                        m.pfaffian()?
                    } else {
                        m.determinant()
                    }
                }
                (Some(e), None) => {
                    let names = match vars {
                        Some(v) => v.split_whitespace().map(str::to_string).collect(),
                        None => collect_identifiers(e)?,
                    };
                    parse_poly(e, &roster(&names))?
                }
                (None, None) => return Err(Error::InvalidOperation("give an expression or --of FILE".into())),
            };
            r.kv("function", &f);
            r.kv("mu", milnor_number_reduced(&f, max_degree));
            r.kv("hessian-corank", hessian_corank(&f));
            let class = classify_function_with(&f, max_degree);
            r.kv("class", &class);
            if matches!(class, SingClass::Undetermined(_)) {
                r.fail("UNDETERMINED");
            }
        }
        Command::Suspend { kind, file } => {
            let m = read_family(file, stdin)?;
            family_lines(&mut r, &suspend(&m, *kind)?);
        }
        Command::Relations { kind, file } => {
            let m = read_family(file, stdin)?;
            let rep = tau_relation_report(&m, *kind, max_degree)?;
            let text = rep.to_string();
            for line in text.lines().filter(|l| !l.starts_with("status:")) {
                r.raw(line);
            }
            r.status = rep.verdict.name();
            if rep.verdict.is_failure() {
                r.code = 1;
            }
        }
        Command::Reduce1 { file, trunc } => {
            let m = read_family(file, stdin)?;
            let result = match m.kind() {
                Kind::Sk => reduce_one_variable_sk(&m, *trunc),
                Kind::Sq => reduce_one_variable_sq(&m, *trunc),
                Kind::Sym => {
                    return Err(Error::KindMismatch("reduce1 takes square or skew families".into()));
                }
            };
            match result {
                Ok(red) => {
                    r.kv(
                        "orders",
                        red.orders.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" "),
                    );
                    r.kv("exact", red.exact);
                    r.kv("ops", red.ops.iter().map(|o| o.to_string()).collect::<Vec<_>>().join("; "));
                    r.kv("normal-form", format_matrix(red.normal_form.matrix()));
                }
                Err(failure) => {
                    r.kv("reason", &failure.reason);
                    r.kv(
                        "partial",
                        failure.partial.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" "),
                    );
                    r.fail("FAIL");
                }
            }
        }
        Command::Perp(input) => {
            let m = read_family(&input.file, stdin)?;
            if m.kind() != Kind::Sk {
                return Err(Error::KindMismatch("perp takes a skew family".into()));
            }
            let n = m.size();
            let span: Vec<ConstMatrix> = (0..m.nvars())
                .map(|v| {
                    let mono = Monomial::var(m.nvars(), v);
                    (0..n)
                        .map(|i| (0..n).map(|j| m.entry(i, j).coeff(&mono)).collect::<Vec<Rational>>())
                        .collect()
                })
                .collect();
            let basis = perp(&span, n)?;
            r.kv("dim", basis.len());
            for (k, b) in basis.iter().enumerate() {
                r.kv(&format!("perp-{}", k + 1), format_const(b));
            }
        }
        Command::Dims { s, k, r: rank } => {
            let v = simple_dimension_cases(*s, *k, *rank)?;
            r.kv("inequality", v.inequality);
            r.kv("rank-allowed", v.rank_allowed);
            r.kv("allowed", v.allowed);
            r.kv("rule", &v.rule);
        }
        Command::Certify { file, ops, against } => {
            let m = read_family(file, stdin)?;
            let ops = parse_ops(ops, m.vars())?;
            let result = m.apply_ops(&ops)?;
            let cert = EquivalenceCertificate::from_ops(m.kind(), m.vars(), m.size(), &ops);
            r.kv("result", format_matrix(result.matrix()));
            r.kv("a", format_matrix(&cert.a));
            if let Some(b) = &cert.b {
                r.kv("b", format_matrix(b));
            }
            let ok = match against {
                Some(path) => {
                    let claimed = read_family(path, stdin)?;
                    let claimed = claimed.embed(m.vars())?;
                    check_certificate(&claimed, &m, &cert)?
                }
                None => check_certificate(&result, &m, &cert)?,
            };
            r.kv("certificate", if ok { "VALID" } else { "INVALID" });
            if !ok {
                r.fail("FAIL");
            }
        }
        Command::Catalog(sub) => {
            let (flt, verify) = match sub {
                CatalogCommand::List(f) => (f, false),
                CatalogCommand::Verify(f) => (f, true),
            };
            let bounds = match &flt.bounds {
                Some(spec) => Bounds::default().with_overrides(spec)?,
                None => Bounds::default(),
            };
            let filter = Filter {
                kind: flt.kind,
                source: flt.source.clone(),
                id: flt.id.clone(),
                bounds,
            };
            let catalog = Catalog::builtin();
            let instances = catalog.enumerate(&filter)?;
            if !verify {
                for inst in &instances {
                    r.kv("instance", format!("{} {} {}", inst.label(), inst.entry.kind, inst.entry.source));
                }
                r.kv("count", instances.len());
            } else {
                let reports = verify_all(&instances, max_degree);
                let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
                let mut worst = Verdict::Pass;
                for rep in &reports {
                    for line in rep.to_string().lines() {
                        r.raw(line);
                    }
                    r.raw("");
                    *counts.entry(rep.status().name()).or_default() += 1;
                    worst = worst.combine(rep.status());
                }
                r.kv("count", reports.len());
                r.kv(
                    "summary",
                    counts.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" "),
                );
                r.status = worst.name();
                if worst.is_failure() {
                    r.code = 1;
                }
            }
        }
    }
    Ok(r)
}
