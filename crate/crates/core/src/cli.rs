//! The `sessdual` command line.
//!
//! Types are given as positional arguments or, when none are given, read from
//! standard input one per line. The check commands take two types; on
//! standard input each line holds both, separated by a comma.
//!
//! Exit codes are the same for every command:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success, or a true verdict |
//! | 1 | a false verdict, or a failed self-test |
//! | 2 | unreadable input or bad usage |
//! | 3 | `--verify` found the computed dual wrong |
//!
//! In batch mode the process exits with the largest code of any line.

use std::ffi::OsString;
use std::io::{BufRead, Write};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::check::{check_dual, check_equiv};
use crate::duality::{has_closed_messages, is_tailrec, mcl, DualMethod, TailRecContext};
use crate::selftest::run_selftest;
use crate::semantics::{tree_dual_related, tree_of, unfold_to_depth, Move, TreeView};
use crate::syntax::{free_vars, normalize, size, TypeExpr};
use crate::text::{parse, print};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "sessdual", version, about = "Duality and equivalence for recursive session types")]
pub struct Cli {
    /// Print one JSON object per input instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Also render the tree of the result down to this depth.
    #[arg(long, global = true, value_name = "N")]
    pub show_tree: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the dual of each type.
    Dual(DualArgs),
    /// Decide whether two types denote the same tree.
    CheckEquiv(PairArgs),
    /// Decide whether two types are dual.
    CheckDual(PairArgs),
    /// Report tail recursion, normal form, message closure and sizes.
    Analyze(TypesArg),
    /// Print the normal form of each type.
    Normalize(TypesArg),
    /// Print the message closure of each type.
    Mclose(TypesArg),
    /// Run the differential property suite on generated types.
    Selftest(SelftestArgs),
}

#[derive(Args, Debug)]
pub struct TypesArg {
    /// Types to process; read from standard input when absent.
    pub types: Vec<String>,
}

#[derive(Args, Debug)]
pub struct DualArgs {
    #[arg(long, default_value = "cdual", value_parser = parse_method)]
    pub method: DualMethod,

    /// Check the result against the input on trees.
    #[arg(long)]
    pub verify: bool,

    /// With `--method naive`, reject inputs whose message types are not all closed.
    #[arg(long)]
    pub require_tailrec: bool,

    #[command(flatten)]
    pub inputs: TypesArg,
}

fn parse_method(s: &str) -> Result<DualMethod, String> {
    s.parse()
}

#[derive(Args, Debug)]
pub struct PairArgs {
    /// Left type; pairs are read from standard input when absent.
    pub left: Option<String>,
    #[arg(requires = "left")]
    pub right: Option<String>,
}

#[derive(Args, Debug)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Types generated per property and configuration.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub count: u64,

    /// Also run properties known to fail, such as naive duality on all types.
    #[arg(long)]
    pub include_refuted: bool,
}

/// One processed input, as printed under `--json`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CliResult {
    pub input: String,
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Move>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs_explored: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tree_check: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tailrec: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normal: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closure_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tree: Option<TreeView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CliResult {
    fn new(input: &str, method: &str) -> Self {
        CliResult { input: input.to_string(), method: method.to_string(), ..CliResult::default() }
    }

    fn failed(input: &str, method: &str, error: String) -> (Self, i32) {
        (CliResult { error: Some(error), ..CliResult::new(input, method) }, EXIT_INPUT)
    }

    fn render_text(&self) -> String {
        let mut lines = Vec::new();
        if let Some(e) = &self.error {
            lines.push(format!("error: {}: {e}", self.input));
        }
        if let Some(r) = &self.result {
            lines.push(r.clone());
        }
        if let Some(v) = self.verdict {
            lines.push(v.to_string());
        }
        if let Some(w) = &self.witness {
            let path: Vec<String> = w.iter().map(ToString::to_string).collect();
            lines.push(format!("witness: {}", if path.is_empty() { "(root)".to_string() } else { path.join(" ") }));
        }
        if let Some(ok) = self.tree_check {
            lines.push(format!("tree check: {}", if ok { "ok" } else { "FAILED" }));
        }
        let fields = [
            ("tailrec", self.tailrec.map(|b| b.to_string())),
            ("normal", self.normal.clone()),
            ("closure", self.closure.clone()),
            ("size", self.size.map(|n| n.to_string())),
            ("closure_size", self.closure_size.map(|n| n.to_string())),
        ];
        for (key, value) in fields {
            if let Some(v) = value {
                lines.push(format!("{key}: {v}"));
            }
        }
        if let Some(t) = &self.tree {
            lines.push(t.to_text().trim_end().to_string());
        }
        lines.join("\n")
    }
}

fn read_closed(text: &str) -> Result<TypeExpr, String> {
    let t = parse(text).map_err(|e| e.to_string())?;
    let free = free_vars(&t);
    if !free.is_empty() {
        let names: Vec<String> = free.iter().map(ToString::to_string).collect();
        return Err(format!("type is not closed: free {}", names.join(", ")));
    }
    Ok(t)
}

fn tree_view(t: &TypeExpr, depth: Option<usize>) -> Option<TreeView> {
    let depth = depth?;
    tree_of(t).ok().map(|s| unfold_to_depth(&s, depth))
}

pub fn cmd_dual(text: &str, args: &DualArgs, show_tree: Option<usize>) -> (CliResult, i32) {
    let method = args.method.name();
    let t = match read_closed(text) {
        Ok(t) => t,
        Err(e) => return CliResult::failed(text, method, e),
    };
    if args.require_tailrec && args.method == DualMethod::Naive && !has_closed_messages(&t) {
        return CliResult::failed(text, method, "a message type is not closed".to_string());
    }
    let d = match args.method.apply(&t) {
        Ok(d) => d,
        Err(e) => return CliResult::failed(text, method, e.to_string()),
    };
    let mut out = CliResult { result: Some(print(&d)), tree: tree_view(&d, show_tree), ..CliResult::new(text, method) };
    let mut code = EXIT_OK;
    if args.verify {
        let ok = match (tree_of(&t), tree_of(&d)) {
            (Ok(a), Ok(b)) => tree_dual_related(&a, &b).verdict,
            _ => false,
        };
        out.tree_check = Some(ok);
        if !ok {
            code = EXIT_VERIFY;
        }
    }
    (out, code)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    Equiv,
    Dual,
}

pub fn cmd_check(kind: CheckKind, left: &str, right: &str) -> (CliResult, i32) {
    let method = match kind {
        CheckKind::Equiv => "equiv",
        CheckKind::Dual => "dual",
    };
    let input = format!("{left}, {right}");
    let (l, r) = match (read_closed(left), read_closed(right)) {
        (Ok(l), Ok(r)) => (l, r),
        (Err(e), _) | (_, Err(e)) => return CliResult::failed(&input, method, e),
    };
    let report = match kind {
        CheckKind::Equiv => check_equiv(&l, &r),
        CheckKind::Dual => check_dual(&l, &r),
    };
    match report {
        Ok(rep) => {
            let code = if rep.verdict { EXIT_OK } else { EXIT_FALSE };
            let out = CliResult {
                verdict: Some(rep.verdict),
                witness: rep.witness,
                pairs_explored: Some(rep.pairs_explored),
                ..CliResult::new(&input, method)
            };
            (out, code)
        }
        Err(e) => CliResult::failed(&input, method, e.to_string()),
    }
}

pub fn cmd_analyze(text: &str, show_tree: Option<usize>) -> (CliResult, i32) {
    let t = match read_closed(text) {
        Ok(t) => t,
        Err(e) => return CliResult::failed(text, "analyze", e),
    };
    let closure = mcl(&t).ok();
    let out = CliResult {
        tailrec: Some(is_tailrec(&t, &TailRecContext::empty())),
        normal: normalize(&t).ok().map(|n| print(&n)),
        closure_size: closure.as_ref().map(size),
        closure: closure.as_ref().map(print),
        size: Some(size(&t)),
        tree: tree_view(&t, show_tree),
        ..CliResult::new(text, "analyze")
    };
    (out, EXIT_OK)
}

fn cmd_transform(
    text: &str,
    method: &str,
    show_tree: Option<usize>,
    f: impl Fn(&TypeExpr) -> Result<TypeExpr, String>,
) -> (CliResult, i32) {
    match read_closed(text).and_then(|t| f(&t)) {
        Ok(u) => {
            let out =
                CliResult { result: Some(print(&u)), tree: tree_view(&u, show_tree), ..CliResult::new(text, method) };
            (out, EXIT_OK)
        }
        Err(e) => CliResult::failed(text, method, e),
    }
}

fn input_lines(given: &[String], stdin: &mut dyn BufRead) -> std::io::Result<Vec<String>> {
    if !given.is_empty() {
        return Ok(given.to_vec());
    }
    let mut lines = Vec::new();
    for line in stdin.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            lines.push(line.trim().to_string());
        }
    }
    Ok(lines)
}

fn emit(json: bool, result: &CliResult, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<()> {
    if json {
        writeln!(out, "{}", serde_json::to_string(result).expect("results serialize"))
    } else if result.error.is_some() {
        writeln!(err, "{}", result.render_text())
    } else {
        writeln!(out, "{}", result.render_text())
    }
}

/// Runs the command line with the given arguments and streams; returns the
/// exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, stdin, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn execute(cli: &Cli, stdin: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    let show = cli.show_tree;
    let results: Vec<(CliResult, i32)> = match &cli.command {
        Command::Selftest(args) => return selftest(cli.json, args, out),
        Command::Dual(args) => {
            input_lines(&args.inputs.types, stdin)?.iter().map(|t| cmd_dual(t, args, show)).collect()
        }
        Command::CheckEquiv(pair) => pairs(pair, stdin)?.into_iter().map(|p| check_line(CheckKind::Equiv, p)).collect(),
        Command::CheckDual(pair) => pairs(pair, stdin)?.into_iter().map(|p| check_line(CheckKind::Dual, p)).collect(),
        Command::Analyze(a) => input_lines(&a.types, stdin)?.iter().map(|t| cmd_analyze(t, show)).collect(),
        Command::Normalize(a) => input_lines(&a.types, stdin)?
            .iter()
            .map(|t| cmd_transform(t, "normalize", show, |u| normalize(u).map_err(|e| e.to_string())))
            .collect(),
        Command::Mclose(a) => input_lines(&a.types, stdin)?
            .iter()
            .map(|t| cmd_transform(t, "mclose", show, |u| mcl(u).map_err(|e| e.to_string())))
            .collect(),
    };
    let mut code = EXIT_OK;
    for (result, c) in &results {
        emit(cli.json, result, out, err)?;
        code = code.max(*c);
    }
    Ok(code)
}

fn pairs(args: &PairArgs, stdin: &mut dyn BufRead) -> std::io::Result<Vec<Result<(String, String), String>>> {
    if let (Some(l), Some(r)) = (&args.left, &args.right) {
        return Ok(vec![Ok((l.clone(), r.clone()))]);
    }
    if let Some(l) = &args.left {
        return Ok(vec![Err(l.clone())]);
    }
    Ok(input_lines(&[], stdin)?
        .into_iter()
        .map(|line| match line.split_once(',') {
            Some((l, r)) => Ok((l.trim().to_string(), r.trim().to_string())),
            None => Err(line),
        })
        .collect())
}

fn check_line(kind: CheckKind, pair: Result<(String, String), String>) -> (CliResult, i32) {
    match pair {
        Ok((l, r)) => cmd_check(kind, &l, &r),
        Err(line) => {
            let method = if kind == CheckKind::Equiv { "equiv" } else { "dual" };
            CliResult::failed(&line, method, "expected two types".to_string())
        }
    }
}

fn selftest(json: bool, args: &SelftestArgs, out: &mut dyn Write) -> std::io::Result<i32> {
    let count = usize::try_from(args.count).unwrap_or(usize::MAX);
    let report = run_selftest(args.seed, count, args.include_refuted);
    if json {
        writeln!(out, "{}", serde_json::to_string(&report).expect("report serializes"))?;
    } else {
        writeln!(out, "seed {} count {}", report.seed, report.count)?;
        for o in &report.outcomes {
            writeln!(out, "{o}")?;
        }
    }
    Ok(if report.all_passed() { EXIT_OK } else { EXIT_FALSE })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str], input: &str) -> (i32, String, String) {
        let mut stdin = input.as_bytes();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut argv = vec!["sessdual"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut stdin, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn dual_args(method: DualMethod, verify: bool) -> DualArgs {
        DualArgs { method, verify, require_tailrec: false, inputs: TypesArg { types: vec![] } }
    }

    #[test]
    fn dual_examples() {
        let (r, code) = cmd_dual("rec X.!X.X", &dual_args(DualMethod::Cdual, true), None);
        assert_eq!((r.result.as_deref(), r.tree_check, code), (Some("rec X.?(rec X.!X.X).X"), Some(true), 0));
        let (r, code) = cmd_dual("end", &dual_args(DualMethod::Naive, true), None);
        assert_eq!((r.result.as_deref(), r.tree_check, code), (Some("end"), Some(true), 0));
        let (r, code) = cmd_dual("rec X.?X.X", &dual_args(DualMethod::Naive, true), None);
        assert_eq!((r.result.as_deref(), r.tree_check, code), (Some("rec X.!X.X"), Some(false), EXIT_VERIFY));
    }

    #[test]
    fn require_tailrec_rejects_open_messages() {
        let args = DualArgs { require_tailrec: true, ..dual_args(DualMethod::Naive, false) };
        assert_eq!(cmd_dual("rec X.?X.X", &args, None).1, EXIT_INPUT);
        assert_eq!(cmd_dual("rec X.?int.X", &args, None).1, EXIT_OK);
    }

    #[test]
    fn check_examples() {
        let (r, code) = cmd_check(CheckKind::Dual, "rec X.?int.X", "rec X.!int.!int.X");
        assert_eq!((r.verdict, code), (Some(true), 0));
        assert_eq!(cmd_check(CheckKind::Equiv, "end", "end").0.verdict, Some(true));
        let (r, code) = cmd_check(CheckKind::Dual, "rec X.?X.X", "rec X.!X.X");
        assert_eq!((r.verdict, code), (Some(false), EXIT_FALSE));
        assert!(r.witness.unwrap().contains(&Move::MsgChild));
    }

    #[test]
    fn analyze_examples() {
        let (r, _) = cmd_analyze("rec X.!(?int.X).end", None);
        assert_eq!(r.tailrec, Some(false));
        let (r, _) = cmd_analyze("rec X.?X.?X.?X.X", None);
        assert_eq!((r.size, r.closure_size), (Some(5), Some(17)));
        let (r, _) = cmd_analyze("end", None);
        assert_eq!((r.tailrec, r.normal.as_deref(), r.size), (Some(true), Some("end"), Some(1)));
    }

    #[test]
    fn input_errors_exit_with_two() {
        assert_eq!(run_args(&["dual", "rec X.X"], "").0, EXIT_INPUT);
        assert_eq!(run_args(&["dual", "!X.end"], "").0, EXIT_INPUT);
        assert_eq!(run_args(&["dual", "?int."], "").0, EXIT_INPUT);
        assert_eq!(run_args(&["selftest", "--count", "0"], "").0, EXIT_INPUT);
        assert_eq!(run_args(&["dual", "--method", "bogus", "end"], "").0, EXIT_INPUT);
    }

    #[test]
    fn json_is_one_line_per_input() {
        let (code, out, _) = run_args(&["--json", "dual", "--method", "lm"], "rec X.!X.X\n\nend\n");
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 2);
        let v: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(v["result"], "rec X.?~X.X");
        assert_eq!(v["method"], "lm");
    }

    #[test]
    fn batch_exit_code_is_the_largest() {
        let (code, out, err) = run_args(&["check-dual"], "rec X.?int.X, rec X.!int.X\nend, ?int.end\nend\n");
        assert_eq!(code, EXIT_INPUT);
        assert_eq!(out.lines().filter(|l| *l == "true" || *l == "false").count(), 2);
        assert!(err.contains("expected two types"));
    }

    #[test]
    fn show_tree_renders_result() {
        let (_, out, _) = run_args(&["--show-tree", "2", "mclose", "rec X.!X.X"], "");
        assert!(out.starts_with("rec X.!(rec X.!X.X).X\n!\n  !\n"), "{out}");
    }
}
