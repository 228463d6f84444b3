//! Line-oriented scenario files: declarations of variable tables, schemes,
//! derivations, morphisms and covers, followed by named checks.
//!
//! One statement per line, `#` starts a comment. Schemes are declared
//! incrementally (`scheme`, then optional `invert` / `roots_of_unity`
//! amendments) and freeze at first use. Reports come back in declaration
//! order regardless of how many worker threads run the checks.

use std::collections::BTreeMap;
use std::sync::Mutex;
use std::time::Instant;

use crate::constructions::{
    cocycle_check, coboundary_solve, cylinder_splitting, deformed_cubic_invariants,
    fiber_ring_decomposition, phi_trivialization, slice_charts, y_charts, Cover, FamilyParams,
};
use crate::derivation::{check_action_axioms, check_equivariant, radical_equal, Derivation, span_contains};
use crate::ideal::{Budget, Ideal};
use crate::modification::verify_modification_is_y;
use crate::poly::Poly;
use crate::report::{CheckError, Checker, Report};
use crate::scheme::{is_isomorphism, smoothness_check, Morphism, Scheme};

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown reference `{name}`")]
    Unknown { line: usize, name: String },
    #[error("line {line}: duplicate name `{name}`")]
    Duplicate { line: usize, name: String },
    #[error("line {line}: `{name}` already frozen (used); amendments must come before first use")]
    Frozen { line: usize, name: String },
    #[error("line {line}: {source}")]
    Build {
        line: usize,
        source: CheckError,
    },
}

// ---------------------------------------------------------------------------
// statements

#[derive(Debug, Clone)]
pub enum Statement {
    Comment(String),
    Blank,
    Vars {
        name: String,
        vars: Vec<String>,
        params: Vec<String>,
    },
    Scheme {
        name: String,
        table: TableRef,
        rels: Vec<String>,
    },
    Invert {
        scheme: String,
        var: String,
    },
    RootsOfUnity {
        scheme: String,
        var: String,
        order: u32,
    },
    Derivation {
        name: String,
        scheme: String,
        images: Vec<(String, String)>,
    },
    Morphism {
        name: String,
        from: String,
        to: String,
        images: Vec<(String, String)>,
    },
    Cover {
        name: String,
        base: String,
        charts: Vec<(String, String)>,
        transitions: Vec<(String, String, String)>,
    },
    Check {
        line: usize,
        kind: CheckKind,
    },
}

#[derive(Debug, Clone)]
pub enum TableRef {
    Named(String),
    Inline {
        vars: Vec<String>,
        params: Vec<String>,
    },
}

#[derive(Debug, Clone)]
pub enum CheckKind {
    Lnd { derivation: String, cap: u32 },
    Action { derivation: String, cap: u32 },
    Kernel {
        derivation: String,
        bound: Option<u32>,
        contains: Vec<String>,
    },
    FixedEmpty { derivation: String },
    FixedRadical {
        derivation: String,
        expect: Vec<String>,
    },
    Invariant { derivation: String, poly: String },
    Member { scheme: String, poly: String },
    Unit { scheme: String, poly: String },
    Smooth { scheme: String, codim: usize },
    Equivariant {
        morphism: String,
        src: String,
        tgt: String,
    },
    Iso { forward: String, backward: String },
    Division {
        derivation: String,
        num: String,
        div: String,
        bound: Option<u32>,
    },
    Cocycle { cover: String },
    Coboundary {
        cover: String,
        degree: u32,
        pole: u32,
        expect_none: bool,
    },
    Phi { m: u32 },
    FiberRing { m: u32 },
    SliceCharts { m: u32, n: u32, r: u32 },
    YCharts(FamilyParams),
    Modification(FamilyParams),
    Cylinder { m: u32, n: u32, r: u32 },
    DeformedCubic,
}

impl CheckKind {
    pub fn label(&self) -> String {
        match self {
            CheckKind::Lnd { derivation, cap } => format!("lnd({derivation},cap={cap})"),
            CheckKind::Action { derivation, cap } => format!("action({derivation},cap={cap})"),
            CheckKind::Kernel { derivation, bound, .. } => match bound {
                Some(b) => format!("kernel({derivation},bound={b})"),
                None => format!("kernel({derivation})"),
            },
            CheckKind::FixedEmpty { derivation } => format!("fixed_empty({derivation})"),
            CheckKind::FixedRadical { derivation, .. } => format!("fixed_radical({derivation})"),
            CheckKind::Invariant { derivation, poly } => {
                format!("invariant({derivation},{poly})")
            }
            CheckKind::Member { scheme, poly } => format!("member({scheme},{poly})"),
            CheckKind::Unit { scheme, poly } => format!("unit({scheme},{poly})"),
            CheckKind::Smooth { scheme, codim } => format!("smooth({scheme},codim={codim})"),
            CheckKind::Equivariant { morphism, src, tgt } => {
                format!("equivariant({morphism},{src},{tgt})")
            }
            CheckKind::Iso { forward, backward } => format!("iso({forward},{backward})"),
            CheckKind::Division { derivation, .. } => format!("division({derivation})"),
            CheckKind::Cocycle { cover } => format!("cocycle({cover})"),
            CheckKind::Coboundary { cover, degree, pole, .. } => {
                format!("coboundary({cover},degree={degree},pole={pole})")
            }
            CheckKind::Phi { m } => format!("phi_trivialization(m={m})"),
            CheckKind::FiberRing { m } => format!("fiber_ring_decomposition(m={m})"),
            CheckKind::SliceCharts { m, n, r } => format!("slice_charts(m={m},n={n},r={r})"),
            CheckKind::YCharts(p) => format!("y_charts({})", p.label()),
            CheckKind::Modification(p) => format!("affine_modification({})", p.label()),
            CheckKind::Cylinder { m, n, r } => format!("cylinder_splitting(m={m},n={n},r={r})"),
            CheckKind::DeformedCubic => "deformed_cubic_invariants".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub statements: Vec<Statement>,
}

// ---------------------------------------------------------------------------
// line tokenizer

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Str(String),
    Comma,
    Colon,
}

fn tokenize_line(line: &str, lineno: usize) -> Result<Vec<Tok>, ScenarioError> {
    let mut out = Vec::new();
    let bytes = line.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' => i += 1,
            ',' => {
                out.push(Tok::Comma);
                i += 1;
            }
            ':' => {
                out.push(Tok::Colon);
                i += 1;
            }
            '"' => {
                let start = i + 1;
                let mut j = start;
                while j < bytes.len() && bytes[j] != b'"' {
                    j += 1;
                }
                if j >= bytes.len() {
                    return Err(ScenarioError::Syntax {
                        line: lineno,
                        msg: "unterminated string".into(),
                    });
                }
                out.push(Tok::Str(line[start..j].to_string()));
                i = j + 1;
            }
            _ => {
                let start = i;
                while i < bytes.len()
                    && !matches!(bytes[i] as char, ' ' | '\t' | ',' | ':' | '"')
                {
                    i += 1;
                }
                out.push(Tok::Word(line[start..i].to_string()));
            }
        }
    }
    Ok(out)
}

struct LineParser<'a> {
    toks: &'a [Tok],
    pos: usize,
    line: usize,
}

impl<'a> LineParser<'a> {
    fn err(&self, msg: &str) -> ScenarioError {
        ScenarioError::Syntax {
            line: self.line,
            msg: msg.to_string(),
        }
    }

    fn done(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn word(&mut self, what: &str) -> Result<String, ScenarioError> {
        match self.toks.get(self.pos) {
            Some(Tok::Word(w)) => {
                self.pos += 1;
                Ok(w.clone())
            }
            _ => Err(self.err(&format!("expected {what}"))),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ScenarioError> {
        let w = self.word(&format!("keyword `{kw}`"))?;
        if w != kw {
            return Err(self.err(&format!("expected keyword `{kw}`, found `{w}`")));
        }
        Ok(())
    }

    fn string(&mut self, what: &str) -> Result<String, ScenarioError> {
        match self.toks.get(self.pos) {
            Some(Tok::Str(s)) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => Err(self.err(&format!("expected quoted {what}"))),
        }
    }

    fn number(&mut self, what: &str) -> Result<u32, ScenarioError> {
        let w = self.word(what)?;
        w.parse()
            .map_err(|_| self.err(&format!("expected a number for {what}, found `{w}`")))
    }

    fn eat_comma(&mut self) -> bool {
        if self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn colon(&mut self) -> Result<(), ScenarioError> {
        if self.peek() == Some(&Tok::Colon) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err("expected `:`"))
        }
    }

    /// name:"expr" pairs separated by commas
    fn pairs(&mut self) -> Result<Vec<(String, String)>, ScenarioError> {
        let mut out = Vec::new();
        loop {
            let name = self.word("a variable name")?;
            self.colon()?;
            let value = self.string("expression")?;
            out.push((name, value));
            if !self.eat_comma() {
                break;
            }
        }
        Ok(out)
    }

    /// comma-separated identifiers
    fn name_list(&mut self) -> Result<Vec<String>, ScenarioError> {
        let mut out = vec![self.word("an identifier")?];
        while self.eat_comma() {
            out.push(self.word("an identifier")?);
        }
        Ok(out)
    }
}

fn parse_family(p: &mut LineParser) -> Result<FamilyParams, ScenarioError> {
    p.keyword("m")?;
    let m = p.number("m")?;
    p.keyword("n")?;
    let n = p.number("n")?;
    p.keyword("r")?;
    let r = p.number("r")?;
    p.keyword("h")?;
    let h = p.string("h")?;
    let mut params: Vec<String> = Vec::new();
    if !p.done() {
        p.keyword("params")?;
        params = p.name_list()?;
    }
    let refs: Vec<&str> = params.iter().map(|s| s.as_str()).collect();
    Ok(FamilyParams::new(m, n, r, &h, &refs))
}

/// Parse scenario text into statements, validating shape but not yet
/// building any algebra.
pub fn parse_scenario(src: &str) -> Result<Scenario, ScenarioError> {
    let mut statements = Vec::new();
    let mut names: Vec<String> = Vec::new();
    let mut declare = |name: &str, line: usize| -> Result<(), ScenarioError> {
        if names.iter().any(|n| n == name) {
            return Err(ScenarioError::Duplicate {
                line,
                name: name.to_string(),
            });
        }
        names.push(name.to_string());
        Ok(())
    };
    for (idx, raw) in src.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim_end();
        let trimmed = line.trim_start();
        if trimmed.is_empty() {
            statements.push(Statement::Blank);
            continue;
        }
        if let Some(c) = trimmed.strip_prefix('#') {
            statements.push(Statement::Comment(c.trim_end().to_string()));
            continue;
        }
        let toks = tokenize_line(trimmed, lineno)?;
        let mut p = LineParser {
            toks: &toks,
            pos: 0,
            line: lineno,
        };
        let head = p.word("a statement keyword")?;
        let st = match head.as_str() {
            "vars" => {
                let name = p.word("table name")?;
                let vars = p.name_list()?;
                let mut params = Vec::new();
                if !p.done() {
                    p.keyword("params")?;
                    params = p.name_list()?;
                }
                declare(&name, lineno)?;
                Statement::Vars { name, vars, params }
            }
            "scheme" => {
                let name = p.word("scheme name")?;
                p.keyword("vars")?;
                let vars = p.name_list()?;
                let mut params = Vec::new();
                let mut rels = Vec::new();
                while !p.done() {
                    let kw = p.word("`rel` or `params`")?;
                    match kw.as_str() {
                        "rel" => rels.push(p.string("relation")?),
                        "params" => params = p.name_list()?,
                        other => {
                            return Err(p.err(&format!("unexpected `{other}`")));
                        }
                    }
                }
                declare(&name, lineno)?;
                let table = if vars.len() == 1 && params.is_empty() {
                    // a single identifier may reference a named table
                    TableRef::Named(vars[0].clone())
                } else {
                    TableRef::Inline { vars, params }
                };
                Statement::Scheme { name, table, rels }
            }
            "invert" => {
                let scheme = p.word("scheme name")?;
                let var = p.word("variable")?;
                Statement::Invert { scheme, var }
            }
            "roots_of_unity" => {
                let scheme = p.word("scheme name")?;
                let var = p.word("variable")?;
                let order = p.number("order")?;
                Statement::RootsOfUnity { scheme, var, order }
            }
            "derivation" => {
                let name = p.word("derivation name")?;
                p.keyword("on")?;
                let scheme = p.word("scheme name")?;
                p.keyword("images")?;
                let images = p.pairs()?;
                declare(&name, lineno)?;
                Statement::Derivation {
                    name,
                    scheme,
                    images,
                }
            }
            "morphism" => {
                let name = p.word("morphism name")?;
                p.keyword("from")?;
                let from = p.word("source scheme")?;
                p.keyword("to")?;
                let to = p.word("target scheme")?;
                p.keyword("images")?;
                let images = p.pairs()?;
                declare(&name, lineno)?;
                Statement::Morphism {
                    name,
                    from,
                    to,
                    images,
                }
            }
            "cover" => {
                let name = p.word("cover name")?;
                p.keyword("on")?;
                let base = p.word("base scheme")?;
                p.keyword("charts")?;
                let charts = p.pairs()?;
                let mut transitions = Vec::new();
                if !p.done() {
                    p.keyword("transitions")?;
                    loop {
                        let a = p.word("chart name")?;
                        if !p.eat_comma() {
                            return Err(p.err("expected `,` between chart names"));
                        }
                        let b = p.word("chart name")?;
                        p.colon()?;
                        let g = p.string("transition")?;
                        transitions.push((a, b, g));
                        if !p.eat_comma() {
                            break;
                        }
                    }
                }
                declare(&name, lineno)?;
                Statement::Cover {
                    name,
                    base,
                    charts,
                    transitions,
                }
            }
            "check" => {
                let kind = parse_check(&mut p)?;
                Statement::Check { line: lineno, kind }
            }
            other => {
                return Err(ScenarioError::Syntax {
                    line: lineno,
                    msg: format!("unknown statement `{other}`"),
                })
            }
        };
        if !p.done() {
            return Err(ScenarioError::Syntax {
                line: lineno,
                msg: "trailing tokens".into(),
            });
        }
        statements.push(st);
    }
    Ok(Scenario { statements })
}

fn parse_check(p: &mut LineParser) -> Result<CheckKind, ScenarioError> {
    let kind = p.word("a check kind")?;
    let k = match kind.as_str() {
        "lnd" => {
            let derivation = p.word("derivation")?;
            p.keyword("cap")?;
            let cap = p.number("cap")?;
            CheckKind::Lnd { derivation, cap }
        }
        "action" => {
            let derivation = p.word("derivation")?;
            p.keyword("cap")?;
            let cap = p.number("cap")?;
            CheckKind::Action { derivation, cap }
        }
        "kernel" => {
            let derivation = p.word("derivation")?;
            let mut bound = None;
            let mut contains = Vec::new();
            while !p.done() {
                let kw = p.word("`bound` or `contains`")?;
                match kw.as_str() {
                    "bound" => bound = Some(p.number("bound")?),
                    "contains" => {
                        contains.push(p.string("polynomial")?);
                        while p.eat_comma() {
                            contains.push(p.string("polynomial")?);
                        }
                    }
                    other => return Err(p.err(&format!("unexpected `{other}`"))),
                }
            }
            CheckKind::Kernel {
                derivation,
                bound,
                contains,
            }
        }
        "fixed_empty" => CheckKind::FixedEmpty {
            derivation: p.word("derivation")?,
        },
        "fixed_radical" => {
            let derivation = p.word("derivation")?;
            p.keyword("expect")?;
            let mut expect = vec![p.string("generator")?];
            while p.eat_comma() {
                expect.push(p.string("generator")?);
            }
            CheckKind::FixedRadical { derivation, expect }
        }
        "invariant" => CheckKind::Invariant {
            derivation: p.word("derivation")?,
            poly: p.string("polynomial")?,
        },
        "member" => CheckKind::Member {
            scheme: p.word("scheme")?,
            poly: p.string("polynomial")?,
        },
        "unit" => CheckKind::Unit {
            scheme: p.word("scheme")?,
            poly: p.string("polynomial")?,
        },
        "smooth" => {
            let scheme = p.word("scheme")?;
            p.keyword("codim")?;
            let codim = p.number("codim")? as usize;
            CheckKind::Smooth { scheme, codim }
        }
        "equivariant" => CheckKind::Equivariant {
            morphism: p.word("morphism")?,
            src: p.word("source derivation")?,
            tgt: p.word("target derivation")?,
        },
        "iso" => CheckKind::Iso {
            forward: p.word("morphism")?,
            backward: p.word("morphism")?,
        },
        "division" => {
            let derivation = p.word("derivation")?;
            p.keyword("num")?;
            let num = p.string("numerator")?;
            p.keyword("div")?;
            let div = p.string("divisor")?;
            let mut bound = None;
            if !p.done() {
                p.keyword("bound")?;
                bound = Some(p.number("bound")?);
            }
            CheckKind::Division {
                derivation,
                num,
                div,
                bound,
            }
        }
        "cocycle" => CheckKind::Cocycle {
            cover: p.word("cover")?,
        },
        "coboundary" => {
            let cover = p.word("cover")?;
            p.keyword("degree")?;
            let degree = p.number("degree")?;
            p.keyword("pole")?;
            let pole = p.number("pole")?;
            let mut expect_none = false;
            if !p.done() {
                p.keyword("expect")?;
                let what = p.word("`none` or `some`")?;
                expect_none = match what.as_str() {
                    "none" => true,
                    "some" => false,
                    other => return Err(p.err(&format!("expected none/some, got `{other}`"))),
                };
            }
            CheckKind::Coboundary {
                cover,
                degree,
                pole,
                expect_none,
            }
        }
        "phi" => {
            p.keyword("m")?;
            CheckKind::Phi { m: p.number("m")? }
        }
        "fiber_ring" => {
            p.keyword("m")?;
            CheckKind::FiberRing { m: p.number("m")? }
        }
        "slice_charts" => {
            p.keyword("m")?;
            let m = p.number("m")?;
            p.keyword("n")?;
            let n = p.number("n")?;
            p.keyword("r")?;
            let r = p.number("r")?;
            CheckKind::SliceCharts { m, n, r }
        }
        "y_charts" => CheckKind::YCharts(parse_family(p)?),
        "modification" => CheckKind::Modification(parse_family(p)?),
        "cylinder" => {
            p.keyword("m")?;
            let m = p.number("m")?;
            p.keyword("n")?;
            let n = p.number("n")?;
            p.keyword("r")?;
            let r = p.number("r")?;
            CheckKind::Cylinder { m, n, r }
        }
        "deformed_cubic" => CheckKind::DeformedCubic,
        other => {
            return Err(p.err(&format!("unknown check kind `{other}`")));
        }
    };
    Ok(k)
}

// ---------------------------------------------------------------------------
// building and running

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub budget: Budget,
    pub degree_bound: u32,
    pub jobs: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            budget: Budget::default(),
            degree_bound: 4,
            jobs: 1,
        }
    }
}

struct PendingScheme {
    vars: Vec<(String, bool)>,
    rels: Vec<String>,
    inverted: Vec<String>,
    roots: Option<(String, u32)>,
    frozen: Option<Scheme>,
    line: usize,
}

impl PendingScheme {
    fn freeze(&mut self, budget: Budget) -> Result<&Scheme, ScenarioError> {
        if self.frozen.is_none() {
            let vars: Vec<(&str, bool)> =
                self.vars.iter().map(|(n, p)| (n.as_str(), *p)).collect();
            let inv: Vec<&str> = self.inverted.iter().map(|s| s.as_str()).collect();
            let roots = self.roots.as_ref().map(|(v, m)| (v.as_str(), *m));
            let rels: Vec<&str> = self.rels.iter().map(|s| s.as_str()).collect();
            let scheme = Scheme::new(&vars, &inv, roots, &rels)
                .map_err(|e| ScenarioError::Build {
                    line: self.line,
                    source: CheckError::Scheme(e),
                })?
                .with_budget(budget);
            self.frozen = Some(scheme);
        }
        Ok(self.frozen.as_ref().unwrap())
    }
}

struct Runtime {
    tables: BTreeMap<String, (Vec<String>, Vec<String>)>,
    schemes: BTreeMap<String, PendingScheme>,
    derivations: BTreeMap<String, Derivation>,
    morphisms: BTreeMap<String, Morphism>,
    covers: BTreeMap<String, Cover>,
}

impl Runtime {
    fn scheme(&mut self, name: &str, line: usize, budget: Budget) -> Result<Scheme, ScenarioError> {
        match self.schemes.get_mut(name) {
            Some(p) => Ok(p.freeze(budget)?.clone()),
            None => Err(ScenarioError::Unknown {
                line,
                name: name.to_string(),
            }),
        }
    }

    fn derivation(&self, name: &str, line: usize) -> Result<Derivation, ScenarioError> {
        self.derivations.get(name).cloned().ok_or_else(|| ScenarioError::Unknown {
            line,
            name: name.to_string(),
        })
    }

    fn morphism(&self, name: &str, line: usize) -> Result<Morphism, ScenarioError> {
        self.morphisms.get(name).cloned().ok_or_else(|| ScenarioError::Unknown {
            line,
            name: name.to_string(),
        })
    }

    fn cover(&self, name: &str, line: usize) -> Result<Cover, ScenarioError> {
        self.covers.get(name).cloned().ok_or_else(|| ScenarioError::Unknown {
            line,
            name: name.to_string(),
        })
    }
}

/// Build all declared objects, then run every check (in declaration
/// order; up to `jobs` checks concurrently). A failing check never aborts
/// the batch.
pub fn run_scenario(scenario: &Scenario, opts: &RunOptions) -> Result<Vec<Report>, ScenarioError> {
    crate::ideal::set_thread_budget(opts.budget);
    let mut rt = Runtime {
        tables: BTreeMap::new(),
        schemes: BTreeMap::new(),
        derivations: BTreeMap::new(),
        morphisms: BTreeMap::new(),
        covers: BTreeMap::new(),
    };
    let mut checks: Vec<(usize, CheckKind)> = Vec::new();

    let mut lineno = 0usize;
    for st in &scenario.statements {
        lineno += 1;
        match st {
            Statement::Blank | Statement::Comment(_) => {}
            Statement::Vars { name, vars, params } => {
                rt.tables
                    .insert(name.clone(), (vars.clone(), params.clone()));
            }
            Statement::Scheme { name, table, rels } => {
                let (vars, params) = match table {
                    TableRef::Named(t) => match rt.tables.get(t) {
                        Some(v) => v.clone(),
                        // a single-name vars clause that is not a table is
                        // a one-variable inline list
                        None => (vec![t.clone()], vec![]),
                    },
                    TableRef::Inline { vars, params } => (vars.clone(), params.clone()),
                };
                let mut all: Vec<(String, bool)> =
                    vars.iter().map(|v| (v.clone(), false)).collect();
                for p in &params {
                    all.push((p.clone(), true));
                }
                rt.schemes.insert(
                    name.clone(),
                    PendingScheme {
                        vars: all,
                        rels: rels.clone(),
                        inverted: vec![],
                        roots: None,
                        frozen: None,
                        line: lineno,
                    },
                );
            }
            Statement::Invert { scheme, var } => {
                let p = rt.schemes.get_mut(scheme).ok_or_else(|| ScenarioError::Unknown {
                    line: lineno,
                    name: scheme.clone(),
                })?;
                if p.frozen.is_some() {
                    return Err(ScenarioError::Frozen {
                        line: lineno,
                        name: scheme.clone(),
                    });
                }
                p.inverted.push(var.clone());
            }
            Statement::RootsOfUnity { scheme, var, order } => {
                let p = rt.schemes.get_mut(scheme).ok_or_else(|| ScenarioError::Unknown {
                    line: lineno,
                    name: scheme.clone(),
                })?;
                if p.frozen.is_some() {
                    return Err(ScenarioError::Frozen {
                        line: lineno,
                        name: scheme.clone(),
                    });
                }
                p.roots = Some((var.clone(), *order));
            }
            Statement::Derivation {
                name,
                scheme,
                images,
            } => {
                let s = rt.scheme(scheme, lineno, opts.budget)?;
                let parsed: Vec<(String, Poly)> = images
                    .iter()
                    .map(|(v, src)| {
                        Ok((
                            v.clone(),
                            s.parse(src).map_err(|e| ScenarioError::Build {
                                line: lineno,
                                source: CheckError::Scheme(e),
                            })?,
                        ))
                    })
                    .collect::<Result<_, ScenarioError>>()?;
                let refs: Vec<(&str, Poly)> =
                    parsed.iter().map(|(v, p)| (v.as_str(), p.clone())).collect();
                let d = Derivation::new(&s, &refs).map_err(|e| ScenarioError::Build {
                    line: lineno,
                    source: CheckError::Derivation(e),
                })?;
                rt.derivations.insert(name.clone(), d);
            }
            Statement::Morphism {
                name,
                from,
                to,
                images,
            } => {
                let src = rt.scheme(from, lineno, opts.budget)?;
                let tgt = rt.scheme(to, lineno, opts.budget)?;
                let parsed: Vec<(String, Poly)> = images
                    .iter()
                    .map(|(v, e)| {
                        Ok((
                            v.clone(),
                            src.parse(e).map_err(|e| ScenarioError::Build {
                                line: lineno,
                                source: CheckError::Scheme(e),
                            })?,
                        ))
                    })
                    .collect::<Result<_, ScenarioError>>()?;
                let refs: Vec<(&str, Poly)> =
                    parsed.iter().map(|(v, p)| (v.as_str(), p.clone())).collect();
                let m = Morphism::new(&src, &tgt, &refs).map_err(|e| ScenarioError::Build {
                    line: lineno,
                    source: CheckError::Scheme(e),
                })?;
                rt.morphisms.insert(name.clone(), m);
            }
            Statement::Cover {
                name,
                base,
                charts,
                transitions,
            } => {
                let b = rt.scheme(base, lineno, opts.budget)?;
                let parsed: Vec<(String, Poly)> = charts
                    .iter()
                    .map(|(n, e)| {
                        Ok((
                            n.clone(),
                            b.parse(e).map_err(|e| ScenarioError::Build {
                                line: lineno,
                                source: CheckError::Scheme(e),
                            })?,
                        ))
                    })
                    .collect::<Result<_, ScenarioError>>()?;
                let refs: Vec<(&str, Poly)> =
                    parsed.iter().map(|(n, p)| (n.as_str(), p.clone())).collect();
                let mut cover = Cover::new(&b, &refs).map_err(|e| ScenarioError::Build {
                    line: lineno,
                    source: e,
                })?;
                for (a, c, g) in transitions {
                    let i = cover
                        .charts()
                        .iter()
                        .position(|ch| &ch.name == a)
                        .ok_or_else(|| ScenarioError::Unknown {
                            line: lineno,
                            name: a.clone(),
                        })?;
                    let j = cover
                        .charts()
                        .iter()
                        .position(|ch| &ch.name == c)
                        .ok_or_else(|| ScenarioError::Unknown {
                            line: lineno,
                            name: c.clone(),
                        })?;
                    let int = cover.intersection(i, j);
                    let poly = int.parse(g).map_err(|e| ScenarioError::Build {
                        line: lineno,
                        source: CheckError::Scheme(e),
                    })?;
                    cover
                        .set_transition(i, j, poly)
                        .map_err(|e| ScenarioError::Build {
                            line: lineno,
                            source: e,
                        })?;
                }
                rt.covers.insert(name.clone(), cover);
            }
            Statement::Check { line, kind } => {
                checks.push((*line, kind.clone()));
            }
        }
    }

    // resolve the referenced objects now so that unknown references are
    // reported eagerly, then run concurrently
    let mut jobs_list: Vec<(usize, Job)> = Vec::new();
    for (idx, (line, kind)) in checks.into_iter().enumerate() {
        let job = build_check(&mut rt, line, kind, opts)?;
        jobs_list.push((idx, job));
    }

    let n = jobs_list.len();
    let results: Mutex<Vec<Option<Report>>> = Mutex::new((0..n).map(|_| None).collect());
    let queue: Mutex<Vec<(usize, Job)>> = Mutex::new(jobs_list.into_iter().rev().collect());
    let workers = opts.jobs.max(1).min(n.max(1));
    let budget = opts.budget;
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                crate::ideal::set_thread_budget(budget);
                let item = queue.lock().unwrap().pop();
                match item {
                    Some((idx, job)) => {
                        let start = Instant::now();
                        let mut rep = job();
                        rep.ms = start.elapsed().as_millis();
                        results.lock().unwrap()[idx] = Some(rep);
                    }
                    None => break,
                }
            });
        }
    });
    Ok(results
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("all checks ran"))
        .collect())
}

type Job = Box<dyn FnOnce() -> Report + Send>;

fn build_check(
    rt: &mut Runtime,
    line: usize,
    kind: CheckKind,
    opts: &RunOptions,
) -> Result<Job, ScenarioError> {
    let label = kind.label();
    let budget = opts.budget;
    let default_bound = opts.degree_bound;
    let job: Job = match kind {
        CheckKind::Lnd { derivation, cap } => {
            let d = rt.derivation(&derivation, line)?;
            Box::new(move || {
                Checker::run(&label, |c| {
                    let nil = d.local_nilpotency(cap)?;
                    c.witness("degrees", nil.table());
                    c.require("locally nilpotent", nil.ok, || nil.table());
                    Ok(())
                })
            })
        }
        CheckKind::Action { derivation, cap } => {
            let d = rt.derivation(&derivation, line)?;
            Box::new(move || {
                Checker::run(&label, |c| {
                    let action = d.exp(cap)?;
                    let ax = check_action_axioms(&action)?;
                    c.require("coaction axioms", ax.ok, || format!("{:?}", ax.witness));
                    Ok(())
                })
            })
        }
        CheckKind::Kernel {
            derivation,
            bound,
            contains,
        } => {
            let d = rt.derivation(&derivation, line)?;
            Box::new(move || {
                Checker::run(&label, |c| {
                    let b = bound.unwrap_or(default_bound);
                    let kernel = d.kernel_search(b)?;
                    c.witness("dimension", kernel.len().to_string());
                    for p in &kernel {
                        c.witness("basis", p.to_string());
                    }
                    for src in &contains {
                        let p = d.scheme().parse(src)?;
                        let nf = d.scheme().nf(&p)?;
                        c.require(&format!("span contains {src}"), span_contains(&kernel, &nf), || {
                            src.clone()
                        });
                    }
                    Ok(())
                })
            })
        }
        CheckKind::FixedEmpty { derivation } => {
            let d = rt.derivation(&derivation, line)?;
            Box::new(move || {
                Checker::run(&label, |c| {
                    let empty = d.fixed_locus().contains_one()?;
                    c.require("fixed locus empty", empty, || "1 not in the fixed ideal".into());
                    Ok(())
                })
            })
        }
        CheckKind::FixedRadical { derivation, expect } => {
            let d = rt.derivation(&derivation, line)?;
            Box::new(move || {
                Checker::run(&label, |c| {
                    let scheme = d.scheme();
                    let mut gens = scheme.ideal().gens().to_vec();
                    for e in &expect {
                        gens.push(scheme.parse(e)?);
                    }
                    let expected = Ideal::new(scheme.vars(), gens).with_budget(*scheme.budget());
                    let ok = radical_equal(&d.fixed_locus(), &expected)?;
                    c.require("fixed locus radical-equal to the expected ideal", ok, || {
                        "radical membership failed".into()
                    });
                    Ok(())
                })
            })
        }
        CheckKind::Invariant { derivation, poly } => {
            let d = rt.derivation(&derivation, line)?;
            Box::new(move || {
                Checker::run(&label, |c| {
                    let p = d.scheme().parse(&poly)?;
                    let img = d.apply(&p)?;
                    c.require("image is zero", img.is_zero(), || img.to_string());
                    Ok(())
                })
            })
        }
        CheckKind::Member { scheme, poly } => {
            let s = rt.scheme(&scheme, line, budget)?;
            Box::new(move || {
                Checker::run(&label, |c| {
                    let p = s.parse(&poly)?;
                    let nf = s.nf(&p)?;
                    c.require("member of the ideal", nf.is_zero(), || nf.to_string());
                    Ok(())
                })
            })
        }
        CheckKind::Unit { scheme, poly } => {
            let s = rt.scheme(&scheme, line, budget)?;
            Box::new(move || {
                Checker::run(&label, |c| {
                    let p = s.parse(&poly)?;
                    match s.ideal().unit_inverse(&p)? {
                        Some(inv) => c.witness("inverse", inv.to_string()),
                        None => c.require("unit", false, || "no inverse".into()),
                    }
                    Ok(())
                })
            })
        }
        CheckKind::Smooth { scheme, codim } => {
            let s = rt.scheme(&scheme, line, budget)?;
            Box::new(move || {
                Checker::run(&label, |c| {
                    let sm = smoothness_check(&s, codim)?;
                    c.require("smooth", sm.smooth, || "Jacobian minors do not generate 1".into());
                    Ok(())
                })
            })
        }
        CheckKind::Equivariant { morphism, src, tgt } => {
            let m = rt.morphism(&morphism, line)?;
            let ds = rt.derivation(&src, line)?;
            let dt = rt.derivation(&tgt, line)?;
            Box::new(move || {
                Checker::run(&label, |c| {
                    let eq = check_equivariant(&m, &ds, &dt)?;
                    c.require("equivariant", eq.ok, || format!("{:?}", eq.witness));
                    Ok(())
                })
            })
        }
        CheckKind::Iso { forward, backward } => {
            let f = rt.morphism(&forward, line)?;
            let g = rt.morphism(&backward, line)?;
            Box::new(move || {
                Checker::run(&label, |c| {
                    let iso = is_isomorphism(&f, &g)?;
                    c.require("mutually inverse", iso.ok, || format!("{:?}", iso.witness));
                    Ok(())
                })
            })
        }
        CheckKind::Division {
            derivation,
            num,
            div,
            bound,
        } => {
            let d = rt.derivation(&derivation, line)?;
            Box::new(move || {
                Checker::run(&label, |c| {
                    let n = d.scheme().parse(&num)?;
                    let v = d.scheme().parse(&div)?;
                    let q = d.invariant_division(&n, &v, bound)?;
                    c.witness("quotient", q.to_string());
                    Ok(())
                })
            })
        }
        CheckKind::Cocycle { cover } => {
            let c0 = rt.cover(&cover, line)?;
            Box::new(move || cocycle_check(&label, &c0))
        }
        CheckKind::Coboundary {
            cover,
            degree,
            pole,
            expect_none,
        } => {
            let c0 = rt.cover(&cover, line)?;
            Box::new(move || {
                Checker::run(&label, |c| {
                    match coboundary_solve(&c0, degree, pole)? {
                        Some(sol) => {
                            for (chart, h) in &sol {
                                c.witness(&format!("h[{chart}]"), h.to_string());
                            }
                            c.require("expected a coboundary", !expect_none, || {
                                "found a coboundary but none was expected".into()
                            });
                        }
                        None => {
                            c.witness("result", "no solution within bounds".to_string());
                            c.require("expected no coboundary within bounds", expect_none, || {
                                "no solution within bounds".into()
                            });
                        }
                    }
                    Ok(())
                })
            })
        }
        CheckKind::Phi { m } => Box::new(move || phi_trivialization(m)),
        CheckKind::FiberRing { m } => Box::new(move || fiber_ring_decomposition(m)),
        CheckKind::SliceCharts { m, n, r } => Box::new(move || slice_charts(m, n, r)),
        CheckKind::YCharts(p) => Box::new(move || y_charts(&p)),
        CheckKind::Modification(p) => Box::new(move || verify_modification_is_y(&p)),
        CheckKind::Cylinder { m, n, r } => Box::new(move || cylinder_splitting(m, n, r)),
        CheckKind::DeformedCubic => Box::new(deformed_cubic_invariants),
    };
    Ok(job)
}

/// Canonical re-formatting: statements are normalized, polynomial strings
/// are reprinted in canonical form, comments and blank lines are kept.
pub fn format_scenario(scenario: &Scenario, opts: &RunOptions) -> Result<String, ScenarioError> {
    // materialize schemes so polynomials can be canonicalized
    let mut rt = Runtime {
        tables: BTreeMap::new(),
        schemes: BTreeMap::new(),
        derivations: BTreeMap::new(),
        morphisms: BTreeMap::new(),
        covers: BTreeMap::new(),
    };
    let mut out = String::new();
    let mut lineno = 0usize;
    for st in &scenario.statements {
        lineno += 1;
        match st {
            Statement::Blank => out.push('\n'),
            Statement::Comment(c) => {
                out.push('#');
                out.push_str(c);
                out.push('\n');
            }
            Statement::Vars { name, vars, params } => {
                rt.tables
                    .insert(name.clone(), (vars.clone(), params.clone()));
                out.push_str(&format!("vars {name} {}", vars.join(",")));
                if !params.is_empty() {
                    out.push_str(&format!(" params {}", params.join(",")));
                }
                out.push('\n');
            }
            Statement::Scheme { name, table, rels } => {
                let (vars, params) = match table {
                    TableRef::Named(t) => match rt.tables.get(t) {
                        Some(v) => v.clone(),
                        None => (vec![t.clone()], vec![]),
                    },
                    TableRef::Inline { vars, params } => (vars.clone(), params.clone()),
                };
                let mut all: Vec<(String, bool)> =
                    vars.iter().map(|v| (v.clone(), false)).collect();
                for p in &params {
                    all.push((p.clone(), true));
                }
                rt.schemes.insert(
                    name.clone(),
                    PendingScheme {
                        vars: all,
                        rels: rels.clone(),
                        inverted: vec![],
                        roots: None,
                        frozen: None,
                        line: lineno,
                    },
                );
                match table {
                    TableRef::Named(t) if rt.tables.contains_key(t) => {
                        out.push_str(&format!("scheme {name} vars {t}"));
                    }
                    _ => {
                        out.push_str(&format!("scheme {name} vars {}", vars.join(",")));
                        if !params.is_empty() {
                            out.push_str(&format!(" params {}", params.join(",")));
                        }
                    }
                }
                for r in rels {
                    out.push_str(&format!(" rel \"{r}\""));
                }
                out.push('\n');
            }
            Statement::Invert { scheme, var } => {
                if let Some(p) = rt.schemes.get_mut(scheme) {
                    p.inverted.push(var.clone());
                }
                out.push_str(&format!("invert {scheme} {var}\n"));
            }
            Statement::RootsOfUnity { scheme, var, order } => {
                if let Some(p) = rt.schemes.get_mut(scheme) {
                    p.roots = Some((var.clone(), *order));
                }
                out.push_str(&format!("roots_of_unity {scheme} {var} {order}\n"));
            }
            Statement::Derivation {
                name,
                scheme,
                images,
            } => {
                let s = rt.scheme(scheme, lineno, opts.budget)?;
                let canon: Vec<String> = images
                    .iter()
                    .map(|(v, e)| {
                        let p = s.parse(e).map_err(|e| ScenarioError::Build {
                            line: lineno,
                            source: CheckError::Scheme(e),
                        })?;
                        Ok(format!("{v}:\"{p}\""))
                    })
                    .collect::<Result<_, ScenarioError>>()?;
                out.push_str(&format!(
                    "derivation {name} on {scheme} images {}\n",
                    canon.join(", ")
                ));
            }
            Statement::Morphism {
                name,
                from,
                to,
                images,
            } => {
                let s = rt.scheme(from, lineno, opts.budget)?;
                let canon: Vec<String> = images
                    .iter()
                    .map(|(v, e)| {
                        let p = s.parse(e).map_err(|e| ScenarioError::Build {
                            line: lineno,
                            source: CheckError::Scheme(e),
                        })?;
                        Ok(format!("{v}:\"{p}\""))
                    })
                    .collect::<Result<_, ScenarioError>>()?;
                out.push_str(&format!(
                    "morphism {name} from {from} to {to} images {}\n",
                    canon.join(", ")
                ));
            }
            Statement::Cover {
                name,
                base,
                charts,
                transitions,
            } => {
                let charts_s: Vec<String> = charts
                    .iter()
                    .map(|(n, e)| format!("{n}:\"{e}\""))
                    .collect();
                out.push_str(&format!(
                    "cover {name} on {base} charts {}",
                    charts_s.join(", ")
                ));
                if !transitions.is_empty() {
                    let ts: Vec<String> = transitions
                        .iter()
                        .map(|(a, b, g)| format!("{a},{b}:\"{g}\""))
                        .collect();
                    out.push_str(&format!(" transitions {}", ts.join(", ")));
                }
                out.push('\n');
            }
            Statement::Check { kind, .. } => {
                out.push_str(&format!("check {}\n", check_source(kind)));
            }
        }
    }
    Ok(out)
}

fn check_source(kind: &CheckKind) -> String {
    match kind {
        CheckKind::Lnd { derivation, cap } => format!("lnd {derivation} cap {cap}"),
        CheckKind::Action { derivation, cap } => format!("action {derivation} cap {cap}"),
        CheckKind::Kernel {
            derivation,
            bound,
            contains,
        } => {
            let mut s = format!("kernel {derivation}");
            if let Some(b) = bound {
                s.push_str(&format!(" bound {b}"));
            }
            if !contains.is_empty() {
                let cs: Vec<String> = contains.iter().map(|c| format!("\"{c}\"")).collect();
                s.push_str(&format!(" contains {}", cs.join(",")));
            }
            s
        }
        CheckKind::FixedEmpty { derivation } => format!("fixed_empty {derivation}"),
        CheckKind::FixedRadical { derivation, expect } => {
            let es: Vec<String> = expect.iter().map(|e| format!("\"{e}\"")).collect();
            format!("fixed_radical {derivation} expect {}", es.join(","))
        }
        CheckKind::Invariant { derivation, poly } => {
            format!("invariant {derivation} \"{poly}\"")
        }
        CheckKind::Member { scheme, poly } => format!("member {scheme} \"{poly}\""),
        CheckKind::Unit { scheme, poly } => format!("unit {scheme} \"{poly}\""),
        CheckKind::Smooth { scheme, codim } => format!("smooth {scheme} codim {codim}"),
        CheckKind::Equivariant { morphism, src, tgt } => {
            format!("equivariant {morphism} {src} {tgt}")
        }
        CheckKind::Iso { forward, backward } => format!("iso {forward} {backward}"),
        CheckKind::Division {
            derivation,
            num,
            div,
            bound,
        } => {
            let mut s = format!("division {derivation} num \"{num}\" div \"{div}\"");
            if let Some(b) = bound {
                s.push_str(&format!(" bound {b}"));
            }
            s
        }
        CheckKind::Cocycle { cover } => format!("cocycle {cover}"),
        CheckKind::Coboundary {
            cover,
            degree,
            pole,
            expect_none,
        } => {
            let mut s = format!("coboundary {cover} degree {degree} pole {pole}");
            if *expect_none {
                s.push_str(" expect none");
            }
            s
        }
        CheckKind::Phi { m } => format!("phi m {m}"),
        CheckKind::FiberRing { m } => format!("fiber_ring m {m}"),
        CheckKind::SliceCharts { m, n, r } => format!("slice_charts m {m} n {n} r {r}"),
        CheckKind::YCharts(p) => format!(
            "y_charts m {} n {} r {} h \"{}\"{}",
            p.m,
            p.n,
            p.r,
            p.h,
            family_params_suffix(p)
        ),
        CheckKind::Modification(p) => format!(
            "modification m {} n {} r {} h \"{}\"{}",
            p.m,
            p.n,
            p.r,
            p.h,
            family_params_suffix(p)
        ),
        CheckKind::Cylinder { m, n, r } => format!("cylinder m {m} n {n} r {r}"),
        CheckKind::DeformedCubic => "deformed_cubic".to_string(),
    }
}

fn family_params_suffix(p: &FamilyParams) -> String {
    if p.params.is_empty() {
        String::new()
    } else {
        format!(" params {}", p.params.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SL2: &str = r#"# special linear group with its fixed point free action
scheme SL2 vars x,y,u,v rel "x*v - y*u - 1"
derivation d on SL2 images x:"y", y:"0", u:"v", v:"0"
check smooth SL2 codim 1
check lnd d cap 32
check fixed_empty d
"#;

    #[test]
    fn minimal_scenario_parses_and_passes() {
        let sc = parse_scenario(SL2).unwrap();
        let reports = run_scenario(&sc, &RunOptions::default()).unwrap();
        assert_eq!(reports.len(), 3);
        assert!(reports.iter().all(|r| r.passed()), "{reports:?}");
    }

    #[test]
    fn undeclared_reference_is_an_error() {
        let sc = parse_scenario("check lnd nosuch cap 32\n").unwrap();
        match run_scenario(&sc, &RunOptions::default()) {
            Err(ScenarioError::Unknown { name, .. }) => assert_eq!(name, "nosuch"),
            other => panic!("expected unknown reference, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_name_is_an_error() {
        let src = "scheme A vars x\nscheme A vars y\n";
        assert!(matches!(
            parse_scenario(src),
            Err(ScenarioError::Duplicate { .. })
        ));
    }

    #[test]
    fn syntax_error_carries_line() {
        let src = "scheme A vars x\nwibble\n";
        match parse_scenario(src) {
            Err(ScenarioError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mutated_derivation_fails_with_witness() {
        let src = r#"scheme X2 vars x,y,u,v rel "x^2*v - y*u - 1"
derivation bad on X2 images x:"y", y:"0", u:"x*v", v:"0"
"#;
        let sc = parse_scenario(src).unwrap();
        match run_scenario(&sc, &RunOptions::default()) {
            Err(ScenarioError::Build { .. }) => {}
            other => panic!("expected build failure, got {other:?}"),
        }
    }

    #[test]
    fn amendment_after_freeze_is_rejected() {
        let src = r#"scheme A vars x,y rel "x*y"
derivation d on A images x:"0", y:"0"
invert A x
"#;
        let sc = parse_scenario(src).unwrap();
        assert!(matches!(
            run_scenario(&sc, &RunOptions::default()),
            Err(ScenarioError::Frozen { .. })
        ));
    }

    #[test]
    fn budget_exceeded_reported_not_fatal() {
        let src = r#"scheme K vars x,y,z rel "x^3*y - z^2" rel "y^3*z - x^2" rel "z^3*x - y^2"
check member K "x"
check member K "0"
"#;
        let sc = parse_scenario(src).unwrap();
        let opts = RunOptions {
            budget: Budget {
                max_pairs: 2,
                max_terms: 100_000,
            },
            ..Default::default()
        };
        let reports = run_scenario(&sc, &opts).unwrap();
        assert_eq!(reports.len(), 2);
        assert_eq!(reports[0].status, crate::report::Status::ExceededBounds);
        // batch isolation: the second check still runs (and also exceeds,
        // since it shares the same ideal, which is fine; the point is the
        // batch did not abort)
        assert!(reports[1].status == crate::report::Status::ExceededBounds
            || reports[1].passed());
    }

    #[test]
    fn invert_and_roots_amendments() {
        let src = r#"scheme U vars y,lam
invert U lam
roots_of_unity U eps 2
check unit U "eps - 1"
check member U "eps + 1"
check unit U "lam^3"
"#;
        let sc = parse_scenario(src).unwrap();
        let reports = run_scenario(&sc, &RunOptions::default()).unwrap();
        assert!(reports.iter().all(|r| r.passed()), "{reports:?}");
    }

    #[test]
    fn named_table_reference() {
        let src = r#"vars T x,y,u,v params a
scheme X vars T rel "x^2*v - y*u - a"
check member X "x^2*v - y*u - a"
"#;
        let sc = parse_scenario(src).unwrap();
        let reports = run_scenario(&sc, &RunOptions::default()).unwrap();
        assert!(reports.iter().all(|r| r.passed()), "{reports:?}");
    }

    #[test]
    fn cover_statement_and_checks() {
        let src = r#"scheme A2 vars x,y
cover C on A2 charts cx:"x", cy:"y" transitions cx,cy:"x_inv - y_inv"
check cocycle C
check coboundary C degree 6 pole 6
"#;
        let sc = parse_scenario(src).unwrap();
        let reports = run_scenario(&sc, &RunOptions::default()).unwrap();
        assert!(reports.iter().all(|r| r.passed()), "{reports:?}");
    }

    #[test]
    fn format_is_canonical_and_stable() {
        let src = "# hello\nscheme A vars x,y rel \"y*x-1\"\ncheck member A \"x*y - 1\"\n";
        let sc = parse_scenario(src).unwrap();
        let formatted = format_scenario(&sc, &RunOptions::default()).unwrap();
        assert!(formatted.contains("# hello"));
        // reformatting the formatted text is a fixed point
        let sc2 = parse_scenario(&formatted).unwrap();
        let formatted2 = format_scenario(&sc2, &RunOptions::default()).unwrap();
        assert_eq!(formatted, formatted2);
    }

    #[test]
    fn jobs_do_not_change_reports() {
        let sc = parse_scenario(SL2).unwrap();
        let seq = run_scenario(&sc, &RunOptions::default()).unwrap();
        let par = run_scenario(
            &sc,
            &RunOptions {
                jobs: 4,
                ..Default::default()
            },
        )
        .unwrap();
        let strip = |rs: &[Report]| -> Vec<Report> {
            rs.iter()
                .map(|r| Report {
                    ms: 0,
                    ..r.clone()
                })
                .collect()
        };
        assert_eq!(strip(&seq), strip(&par));
    }
}
