//! Instance files (`.etw`): named blocks defining programs, trees,
//! families, domains and spaces. Line comments start with `#`. Parse errors
//! carry 1-based line numbers; references resolve against the instance
//! first and the built-in fixtures second.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::budgets::Budgets;
use crate::domains::DomainBasis;
use crate::fixtures;
use crate::kernel::{encode_program, parse_program_text, Program, ProgramIndex};
use crate::nat::Nat;
use crate::numberings::{CeSet, SigmaFn, WnFamily};
use crate::trees::{FiniteSeq, Tree};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct InstanceError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, InstanceError> {
    Err(InstanceError {
        line,
        message: message.into(),
    })
}

/// A parsed instance: named definitions in file order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub programs: Vec<(String, Program2)>,
    pub trees: Vec<(String, TreeDef)>,
    pub families: Vec<(String, FamilyDef)>,
    pub domains: Vec<(String, DomainDef)>,
    pub spaces: Vec<(String, SpaceDef)>,
}

/// A program given by text or by Gödel number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Program2 {
    Text(String),
    Index(Nat),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TreeDef {
    Explicit { vertices: Vec<Vec<Nat>> },
    Program { program: String, budget: Nat },
    BuiltinInseparable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum MemberDef {
    Explicit(BTreeSet<Nat>),
    Program(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SigmaDef {
    Program(String),
    IntersectionWith(BTreeSet<Nat>),
    Const(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDef {
    pub members: Vec<(String, MemberDef)>,
    pub sigma: SigmaDef,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum DomainDef {
    Explicit {
        elements: Vec<String>,
        leq: Vec<(String, String)>,
    },
    Program {
        waybelow: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpaceDef {
    FromTree(String),
    FromFamily(String),
    Explicit {
        points: Vec<String>,
        opens: Vec<BTreeSet<String>>,
    },
}

// ---------------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Num(Nat),
    Punct(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, InstanceError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let mut chars = body.chars().peekable();
        while let Some(&c) = chars.peek() {
            if c.is_whitespace() || c == ',' {
                chars.next();
            } else if c.is_ascii_digit() {
                let mut n: u128 = 0;
                while let Some(&d) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    n = n * 10 + (d as u128 - '0' as u128);
                    if n > u64::MAX as u128 {
                        return err(line, "number too large");
                    }
                    chars.next();
                }
                out.push(Token {
                    tok: Tok::Num(n as u64),
                    line,
                });
            } else if c.is_alphanumeric() || c == '_' || c == '-' {
                let mut w = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_alphanumeric() || d == '_' || d == '-' {
                        w.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token {
                    tok: Tok::Word(w),
                    line,
                });
            } else if "{}()[]:=".contains(c) {
                chars.next();
                out.push(Token {
                    tok: Tok::Punct(c),
                    line,
                });
            } else {
                return err(line, format!("unexpected character `{c}`"));
            }
        }
    }
    Ok(out)
}

struct Cursor {
    toks: Vec<Token>,
    pos: usize,
}

impl Cursor {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn line(&self) -> usize {
        self.toks
            .get(self.pos.min(self.toks.len().saturating_sub(1)))
            .map(|t| t.line)
            .unwrap_or(0)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_word(&mut self) -> Result<(String, usize), InstanceError> {
        match self.next() {
            Some(Token {
                tok: Tok::Word(w),
                line,
            }) => Ok((w, line)),
            Some(t) => err(t.line, format!("expected a name, found {:?}", t.tok)),
            None => err(self.line(), "unexpected end of file"),
        }
    }

    fn expect_num(&mut self) -> Result<Nat, InstanceError> {
        match self.next() {
            Some(Token {
                tok: Tok::Num(n), ..
            }) => Ok(n),
            Some(t) => err(t.line, format!("expected a number, found {:?}", t.tok)),
            None => err(self.line(), "unexpected end of file"),
        }
    }

    fn expect_punct(&mut self, c: char) -> Result<usize, InstanceError> {
        match self.next() {
            Some(Token {
                tok: Tok::Punct(p),
                line,
            }) if p == c => Ok(line),
            Some(t) => err(t.line, format!("expected `{c}`, found {:?}", t.tok)),
            None => err(self.line(), format!("expected `{c}`, found end of file")),
        }
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if matches!(self.peek(), Some(Token { tok: Tok::Punct(p), .. }) if *p == c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if matches!(self.peek(), Some(Token { tok: Tok::Word(v), .. }) if v == w) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

/// Parses instance text. Program bodies are kept verbatim (they have their
/// own line-oriented format), so programs are re-extracted from the raw text
/// by brace matching.
pub fn parse_instance(text: &str) -> Result<InstanceFile, InstanceError> {
    let mut instance = InstanceFile::default();
    // first pass: extract program text blocks verbatim and blank them out
    let (blanked, programs) = extract_program_blocks(text)?;
    instance.programs = programs;
    let toks = tokenize(&blanked)?;
    let mut cur = Cursor { toks, pos: 0 };
    while let Some(t) = cur.peek().cloned() {
        match &t.tok {
            Tok::Word(w) => match w.as_str() {
                "tree" => parse_tree(&mut cur, &mut instance)?,
                "family" => parse_family(&mut cur, &mut instance)?,
                "domain" => parse_domain(&mut cur, &mut instance)?,
                "space" => parse_space(&mut cur, &mut instance)?,
                other => return err(t.line, format!("unknown block keyword `{other}`")),
            },
            other => return err(t.line, format!("expected a block keyword, found {other:?}")),
        }
    }
    check_unique_names(&instance)?;
    Ok(instance)
}

fn check_unique_names(instance: &InstanceFile) -> Result<(), InstanceError> {
    // names are unique per kind; cross-kind reuse is allowed
    fn check_kind(names: Vec<&str>) -> Result<(), InstanceError> {
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return err(0, format!("duplicate definition of `{n}`"));
            }
        }
        Ok(())
    }
    check_kind(instance.programs.iter().map(|(n, _)| n.as_str()).collect())?;
    check_kind(instance.trees.iter().map(|(n, _)| n.as_str()).collect())?;
    check_kind(instance.families.iter().map(|(n, _)| n.as_str()).collect())?;
    check_kind(instance.domains.iter().map(|(n, _)| n.as_str()).collect())?;
    check_kind(instance.spaces.iter().map(|(n, _)| n.as_str()).collect())?;
    Ok(())
}

/// Pulls `program <name> { ... }` and `program <name> index <n>` blocks out
/// of the raw text, replacing them with blanks so the token parser never
/// sees instruction mnemonics.
fn extract_program_blocks(
    text: &str,
) -> Result<(String, Vec<(String, Program2)>), InstanceError> {
    let mut out_lines: Vec<String> = Vec::new();
    let mut programs = Vec::new();
    let lines: Vec<&str> = text.lines().collect();
    let mut i = 0;
    while i < lines.len() {
        let raw = lines[i];
        let body = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let mut words = body.split_whitespace();
        if words.next() == Some("program") {
            let line_no = i + 1;
            let Some(name) = words.next() else {
                return err(line_no, "program block needs a name");
            };
            match words.next() {
                Some("index") => {
                    let Some(n) = words.next().and_then(|w| w.parse::<Nat>().ok()) else {
                        return err(line_no, "expected a numeric index");
                    };
                    programs.push((name.to_string(), Program2::Index(n)));
                    out_lines.push(String::new());
                    i += 1;
                }
                Some("{") => {
                    let mut body_lines = Vec::new();
                    out_lines.push(String::new());
                    i += 1;
                    loop {
                        if i >= lines.len() {
                            return err(line_no, "unterminated program block");
                        }
                        let inner = lines[i];
                        let stripped = match inner.find('#') {
                            Some(p) => &inner[..p],
                            None => inner,
                        };
                        if stripped.trim() == "}" {
                            out_lines.push(String::new());
                            i += 1;
                            break;
                        }
                        body_lines.push(inner.to_string());
                        out_lines.push(String::new());
                        i += 1;
                    }
                    programs.push((name.to_string(), Program2::Text(body_lines.join("\n"))));
                }
                other => {
                    return err(
                        line_no,
                        format!("expected `{{` or `index`, found {other:?}"),
                    )
                }
            }
        } else {
            out_lines.push(raw.to_string());
            i += 1;
        }
    }
    Ok((out_lines.join("\n"), programs))
}

fn parse_nat_set(cur: &mut Cursor) -> Result<BTreeSet<Nat>, InstanceError> {
    cur.expect_punct('{')?;
    let mut out = BTreeSet::new();
    while !cur.eat_punct('}') {
        out.insert(cur.expect_num()?);
    }
    Ok(out)
}

fn parse_seq(cur: &mut Cursor) -> Result<Vec<Nat>, InstanceError> {
    cur.expect_punct('(')?;
    let mut out = Vec::new();
    while !cur.eat_punct(')') {
        out.push(cur.expect_num()?);
    }
    Ok(out)
}

fn parse_tree(cur: &mut Cursor, instance: &mut InstanceFile) -> Result<(), InstanceError> {
    cur.next(); // `tree`
    let (name, line) = cur.expect_word()?;
    let (kind, _) = cur.expect_word()?;
    let def = match kind.as_str() {
        "explicit" => {
            cur.expect_punct('{')?;
            let (kw, kw_line) = cur.expect_word()?;
            if kw != "vertices" {
                return err(kw_line, "expected `vertices:`");
            }
            cur.expect_punct(':')?;
            cur.expect_punct('[')?;
            let mut vertices = Vec::new();
            while !cur.eat_punct(']') {
                vertices.push(parse_seq(cur)?);
            }
            cur.expect_punct('}')?;
            TreeDef::Explicit { vertices }
        }
        "program" => {
            let (prog, _) = cur.expect_word()?;
            let budget = if cur.eat_word("budget") {
                cur.expect_num()?
            } else {
                crate::budgets::DEFAULT_STEPS
            };
            TreeDef::Program {
                program: prog,
                budget,
            }
        }
        "builtin" => {
            let (which, wline) = cur.expect_word()?;
            if which != "inseparable" {
                return err(wline, format!("unknown builtin tree `{which}`"));
            }
            TreeDef::BuiltinInseparable
        }
        other => return err(line, format!("unknown tree kind `{other}`")),
    };
    instance.trees.push((name, def));
    Ok(())
}

fn parse_family(cur: &mut Cursor, instance: &mut InstanceFile) -> Result<(), InstanceError> {
    cur.next(); // `family`
    let (name, line) = cur.expect_word()?;
    cur.expect_punct('{')?;
    let mut members = Vec::new();
    let mut sigma = None;
    loop {
        if cur.eat_punct('}') {
            break;
        }
        let (kw, kw_line) = cur.expect_word()?;
        match kw.as_str() {
            "member" => {
                let (mname, _) = cur.expect_word()?;
                cur.expect_punct('=')?;
                if cur.eat_word("program") {
                    let (p, _) = cur.expect_word()?;
                    members.push((mname, MemberDef::Program(p)));
                } else {
                    members.push((mname, MemberDef::Explicit(parse_nat_set(cur)?)));
                }
            }
            "sigma" => {
                if cur.eat_word("intersection-with") {
                    sigma = Some(SigmaDef::IntersectionWith(parse_nat_set(cur)?));
                } else if cur.eat_word("program") {
                    let (p, _) = cur.expect_word()?;
                    sigma = Some(SigmaDef::Program(p));
                } else if cur.eat_word("const") {
                    let (p, _) = cur.expect_word()?;
                    sigma = Some(SigmaDef::Const(p));
                } else {
                    return err(
                        kw_line,
                        "expected `intersection-with`, `program` or `const` after sigma",
                    );
                }
            }
            other => return err(kw_line, format!("unknown family item `{other}`")),
        }
    }
    let Some(sigma) = sigma else {
        return err(line, format!("family `{name}` is missing its sigma"));
    };
    instance.families.push((name, FamilyDef { members, sigma }));
    Ok(())
}

fn parse_domain(cur: &mut Cursor, instance: &mut InstanceFile) -> Result<(), InstanceError> {
    cur.next(); // `domain`
    let (name, line) = cur.expect_word()?;
    let (kind, _) = cur.expect_word()?;
    let def = match kind.as_str() {
        "explicit" => {
            cur.expect_punct('{')?;
            let (kw, kw_line) = cur.expect_word()?;
            if kw != "elements" {
                return err(kw_line, "expected `elements:`");
            }
            cur.expect_punct(':')?;
            cur.expect_punct('[')?;
            let mut elements = Vec::new();
            while !cur.eat_punct(']') {
                elements.push(cur.expect_word()?.0);
            }
            let (kw, kw_line) = cur.expect_word()?;
            if kw != "leq" {
                return err(kw_line, "expected `leq:`");
            }
            cur.expect_punct(':')?;
            cur.expect_punct('[')?;
            let mut leq = Vec::new();
            while !cur.eat_punct(']') {
                cur.expect_punct('(')?;
                let (a, _) = cur.expect_word()?;
                let (b, _) = cur.expect_word()?;
                cur.expect_punct(')')?;
                leq.push((a, b));
            }
            cur.expect_punct('}')?;
            DomainDef::Explicit { elements, leq }
        }
        "program" => {
            cur.expect_punct('{')?;
            let (kw, kw_line) = cur.expect_word()?;
            if kw != "waybelow" {
                return err(kw_line, "expected `waybelow:`");
            }
            cur.expect_punct(':')?;
            let (p, _) = cur.expect_word()?;
            cur.expect_punct('}')?;
            DomainDef::Program { waybelow: p }
        }
        other => return err(line, format!("unknown domain kind `{other}`")),
    };
    instance.domains.push((name, def));
    Ok(())
}

fn parse_space(cur: &mut Cursor, instance: &mut InstanceFile) -> Result<(), InstanceError> {
    cur.next(); // `space`
    let (name, line) = cur.expect_word()?;
    let (kind, _) = cur.expect_word()?;
    let def = match kind.as_str() {
        "from-tree" => SpaceDef::FromTree(cur.expect_word()?.0),
        "from-family" => SpaceDef::FromFamily(cur.expect_word()?.0),
        "explicit" => {
            cur.expect_punct('{')?;
            let (kw, kw_line) = cur.expect_word()?;
            if kw != "points" {
                return err(kw_line, "expected `points:`");
            }
            cur.expect_punct(':')?;
            cur.expect_punct('[')?;
            let mut points = Vec::new();
            while !cur.eat_punct(']') {
                points.push(cur.expect_word()?.0);
            }
            let (kw, kw_line) = cur.expect_word()?;
            if kw != "opens" {
                return err(kw_line, "expected `opens:`");
            }
            cur.expect_punct(':')?;
            cur.expect_punct('[')?;
            let mut opens = Vec::new();
            while !cur.eat_punct(']') {
                cur.expect_punct('{')?;
                let mut open = BTreeSet::new();
                while !cur.eat_punct('}') {
                    open.insert(cur.expect_word()?.0);
                }
                opens.push(open);
            }
            cur.expect_punct('}')?;
            SpaceDef::Explicit { points, opens }
        }
        other => return err(line, format!("unknown space kind `{other}`")),
    };
    instance.spaces.push((name, def));
    Ok(())
}

// ---------------------------------------------------------------------------
// Resolution
// ---------------------------------------------------------------------------

/// A fully resolved instance: concrete objects, ready to run.
#[derive(Debug, Clone, Default)]
pub struct ResolvedInstance {
    pub programs: Vec<(String, Program)>,
    pub trees: Vec<(String, Tree)>,
    pub families: Vec<(String, WnFamily)>,
    pub domains: Vec<(String, DomainBasis)>,
    pub raw_domains: Vec<(String, CeSet)>,
    pub spaces: Vec<(String, SpaceSource)>,
}

/// What a named space is built from.
#[derive(Debug, Clone)]
pub enum SpaceSource {
    Tree(Tree),
    Family(WnFamily),
    Explicit {
        points: Vec<String>,
        opens: Vec<BTreeSet<String>>,
    },
}

impl ResolvedInstance {
    pub fn program(&self, name: &str) -> Option<Program> {
        self.programs
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, p)| p.clone())
            .or_else(|| fixtures::builtin_program(name))
    }

    pub fn tree(&self, name: &str) -> Option<Tree> {
        self.trees
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t.clone())
            .or_else(|| fixtures::builtin_tree(name))
    }

    pub fn family(&self, name: &str) -> Option<WnFamily> {
        self.families
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, f)| f.clone())
            .or_else(|| fixtures::builtin_family(name))
    }

    pub fn domain(&self, name: &str) -> Option<DomainBasis> {
        self.domains
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, d)| d.clone())
            .or_else(|| fixtures::builtin_domain(name))
    }

    pub fn space(&self, name: &str) -> Option<&SpaceSource> {
        self.spaces.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }
}

/// Resolves a parsed instance: parse program bodies, check references, and
/// construct every defined object.
pub fn resolve(instance: &InstanceFile, budgets: Budgets) -> Result<ResolvedInstance, InstanceError> {
    let mut out = ResolvedInstance::default();
    for (name, def) in &instance.programs {
        let program = match def {
            Program2::Text(text) => parse_program_text(text)
                .map_err(|e| InstanceError {
                    line: e.line,
                    message: format!("in program `{name}`: {e}"),
                })?,
            Program2::Index(n) => crate::kernel::decode_program(&ProgramIndex::from(*n)),
        };
        out.programs.push((name.clone(), program));
    }
    let lookup_program = |out: &ResolvedInstance, name: &str| -> Result<Program, InstanceError> {
        out.program(name)
            .ok_or_else(|| InstanceError {
                line: 0,
                message: format!("unresolved program reference `{name}`"),
            })
    };
    for (name, def) in &instance.trees {
        let tree = match def {
            TreeDef::Explicit { vertices } => Tree::explicit(
                vertices.iter().map(|v| FiniteSeq::from(v.clone())),
            )
            .map_err(|e| InstanceError {
                line: 0,
                message: format!("tree `{name}`: {e}"),
            })?,
            TreeDef::Program { program, budget } => {
                let p = lookup_program(&out, program)?;
                Tree::Program {
                    index: encode_program(&p),
                    query_budget: *budget,
                }
            }
            TreeDef::BuiltinInseparable => Tree::Inseparable,
        };
        out.trees.push((name.clone(), tree));
    }
    for (name, def) in &instance.families {
        let mut members = Vec::new();
        for (mname, m) in &def.members {
            match m {
                MemberDef::Explicit(set) => members.push(set.clone()),
                MemberDef::Program(p) => {
                    let prog = lookup_program(&out, p)?;
                    let saturated = CeSet::from_program(&prog).stage(budgets.stages);
                    let _ = mname;
                    members.push(saturated);
                }
            }
        }
        let sigma = match &def.sigma {
            SigmaDef::IntersectionWith(f) => SigmaFn::IntersectionWith(f.clone()),
            SigmaDef::Program(p) => SigmaFn::Program(encode_program(&lookup_program(&out, p)?)),
            SigmaDef::Const(p) => SigmaFn::ConstIndex(encode_program(&lookup_program(&out, p)?)),
        };
        let family =
            WnFamily::explicit(sigma, members, budgets).map_err(|e| InstanceError {
                line: 0,
                message: format!("family `{name}`: {e}"),
            })?;
        out.families.push((name.clone(), family));
    }
    for (name, def) in &instance.domains {
        match def {
            DomainDef::Explicit { elements, leq } => {
                let index_of = |l: &str| elements.iter().position(|e| e == l);
                let mut pairs = Vec::new();
                for (a, b) in leq {
                    let (Some(ia), Some(ib)) = (index_of(a), index_of(b)) else {
                        return err(0, format!("domain `{name}`: unknown element in leq pair"));
                    };
                    pairs.push((ia, ib));
                }
                let domain =
                    DomainBasis::new(elements.clone(), &pairs).map_err(|e| InstanceError {
                        line: 0,
                        message: format!("domain `{name}`: {e}"),
                    })?;
                out.domains.push((name.clone(), domain));
            }
            DomainDef::Program { waybelow } => {
                let p = lookup_program(&out, waybelow)?;
                out.raw_domains
                    .push((name.clone(), CeSet::from_program(&p)));
            }
        }
    }
    for (name, def) in &instance.spaces {
        let source = match def {
            SpaceDef::FromTree(t) => SpaceSource::Tree(out.tree(t).ok_or_else(|| {
                InstanceError {
                    line: 0,
                    message: format!("unresolved tree reference `{t}`"),
                }
            })?),
            SpaceDef::FromFamily(f) => SpaceSource::Family(out.family(f).ok_or_else(|| {
                InstanceError {
                    line: 0,
                    message: format!("unresolved family reference `{f}`"),
                }
            })?),
            SpaceDef::Explicit { points, opens } => SpaceSource::Explicit {
                points: points.clone(),
                opens: opens.clone(),
            },
        };
        out.spaces.push((name.clone(), source));
    }
    Ok(out)
}
