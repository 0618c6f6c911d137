//! Parser for the functional-module subset and for terms.
//!
//! ```text
//! file      ::= module*
//! module    ::= "fmod" NAME "is" stmt* "endfm"
//! stmt      ::= ("sort" | "sorts") NAME+ "."
//!             | ("subsort" | "subsorts") NAME+ ("<" NAME+)+ "."
//!             | "op" OPNAME ":" NAME* "->" NAME attrs? "."
//!             | "ops" OPNAME+ ":" NAME* "->" NAME attrs? "."
//!             | ("var" | "vars") NAME+ ":" SORT "."
//!             | "eq" ("[" LABEL "]" ":")? term "=" term ("[" "variant" "]")? "."
//! attrs     ::= "[" ("assoc" | "comm" | "id:" term | "ctor")* "]"
//! SORT      ::= NAME | "[" NAME "]"
//! term      ::= operand (INFIX operand)*
//! operand   ::= "(" term ")" | NAME ":" SORT | NAME "(" term ("," term)* ")" | NAME
//! ```
//!
//! Infix operators are declared as `_tok_`. A chain `a tok b tok c` is only
//! accepted when every link uses the same operator and that operator is
//! associative; any other mixture needs parentheses.
//!
//! Comments start with `***` or `---` and run to the end of the line.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::lexer::{lex, LineMap, Tok, Token};
use crate::sort::{KindId, SortGraph, SortRef};
use crate::term::{OpId, Term, Var};
use crate::theory::{Axioms, Equation, OpDecl, OpFamily, Syntax, Theory};

#[derive(Clone, Debug)]
struct Chunk {
    text: String,
    offset: usize,
}

fn chunks(src: &str) -> Vec<Chunk> {
    let mut out = Vec::new();
    let mut cur: Option<(usize, String)> = None;
    for (i, c) in src.char_indices() {
        if c.is_whitespace() {
            if let Some((o, t)) = cur.take() {
                out.push(Chunk { text: t, offset: o });
            }
        } else {
            cur.get_or_insert_with(|| (i, String::new())).1.push(c);
        }
    }
    if let Some((o, t)) = cur {
        out.push(Chunk { text: t, offset: o });
    }
    out
}

fn strip_comments(src: &str) -> String {
    let mut out = String::with_capacity(src.len());
    for line in src.split_inclusive('\n') {
        let cut = [line.find("***"), line.find("---")].into_iter().flatten().min();
        match cut {
            Some(i) => {
                out.push_str(&line[..i]);
                out.extend(line[i..].chars().map(|c| if c == '\n' { '\n' } else { ' ' }));
            }
            None => out.push_str(line),
        }
    }
    out
}

struct RawOp {
    name: String,
    args: Vec<String>,
    range: String,
    assoc: bool,
    comm: bool,
    id: Option<(usize, usize)>,
    offset: usize,
}

struct RawEq {
    label: Option<String>,
    lhs: Vec<Token>,
    rhs: Vec<Token>,
    variant: bool,
    offset: usize,
}

struct RawModule {
    name: String,
    sorts: Vec<(String, usize)>,
    subsorts: Vec<(String, String, usize)>,
    ops: Vec<RawOp>,
    vars: Vec<(String, String, usize)>,
    eqs: Vec<RawEq>,
}

const UNSUPPORTED: &[&str] = &[
    "ceq", "cmb", "mb", "rl", "crl", "including", "inc", "protecting", "pr", "extending", "ex", "mod", "endm", "th",
    "view", "fth",
];

/// Parses the first module of `text`.
pub fn parse_module(text: &str) -> Result<Theory> {
    let mut all = parse_modules(text)?;
    if all.is_empty() {
        return Err(Error::syntax(1, 1, "no module found"));
    }
    Ok(all.remove(0))
}

/// Parses every module in `text`. Modules are independent of each other.
pub fn parse_modules(text: &str) -> Result<Vec<Theory>> {
    let clean = strip_comments(text);
    let lines = LineMap::new(&clean);
    let err = |offset: usize, msg: String| {
        let (l, c) = lines.locate(offset);
        Error::syntax(l, c, msg)
    };
    let cs = chunks(&clean);
    let mut i = 0;
    let mut out = Vec::new();
    while i < cs.len() {
        if cs[i].text != "fmod" {
            if UNSUPPORTED.contains(&cs[i].text.as_str()) {
                return Err(Error::UnsupportedFeature(cs[i].text.clone()));
            }
            return Err(err(cs[i].offset, format!("expected `fmod`, found `{}`", cs[i].text)));
        }
        let name = cs.get(i + 1).ok_or_else(|| err(cs[i].offset, "missing module name".into()))?;
        match cs.get(i + 2) {
            Some(c) if c.text == "is" => {}
            _ => return Err(err(name.offset, "expected `is` after module name".into())),
        }
        i += 3;
        let mut m = RawModule {
            name: name.text.clone(),
            sorts: vec![],
            subsorts: vec![],
            ops: vec![],
            vars: vec![],
            eqs: vec![],
        };
        loop {
            let Some(kw) = cs.get(i) else {
                return Err(err(clean.len(), "missing `endfm`".into()));
            };
            if kw.text == "endfm" {
                i += 1;
                break;
            }
            let start = i;
            let mut end = i;
            while end < cs.len() && cs[end].text != "." {
                if cs[end].text == "endfm" {
                    return Err(err(cs[end].offset, "statement not terminated by ` .`".into()));
                }
                end += 1;
            }
            if end == cs.len() {
                return Err(err(kw.offset, "statement not terminated by ` .`".into()));
            }
            let stmt = &cs[start + 1..end];
            let body_range = (kw.offset + kw.text.len(), cs[end].offset);
            statement(&mut m, kw, stmt, &clean, body_range, &lines)?;
            i = end + 1;
        }
        out.push(build(m, &clean, &lines)?);
    }
    Ok(out)
}

fn statement(
    m: &mut RawModule,
    kw: &Chunk,
    stmt: &[Chunk],
    src: &str,
    body: (usize, usize),
    lines: &LineMap,
) -> Result<()> {
    let err = |offset: usize, msg: String| {
        let (l, c) = lines.locate(offset);
        Error::syntax(l, c, msg)
    };
    match kw.text.as_str() {
        "sort" | "sorts" => {
            if stmt.is_empty() {
                return Err(err(kw.offset, "expected sort names".into()));
            }
            m.sorts.extend(stmt.iter().map(|c| (c.text.clone(), c.offset)));
        }
        "subsort" | "subsorts" => {
            let groups: Vec<&[Chunk]> = stmt.split(|c| c.text == "<").collect();
            if groups.len() < 2 || groups.iter().any(|g| g.is_empty()) {
                return Err(err(kw.offset, "malformed subsort declaration".into()));
            }
            for w in groups.windows(2) {
                for lo in w[0] {
                    for hi in w[1] {
                        m.subsorts.push((lo.text.clone(), hi.text.clone(), lo.offset));
                    }
                }
            }
        }
        "op" | "ops" => {
            let colon = stmt
                .iter()
                .position(|c| c.text == ":")
                .ok_or_else(|| err(kw.offset, "expected `:` in operator declaration".into()))?;
            let names = &stmt[..colon];
            if names.is_empty() || (kw.text == "op" && names.len() != 1) {
                return Err(err(kw.offset, "expected operator name".into()));
            }
            let rest = &stmt[colon + 1..];
            let arrow = rest
                .iter()
                .position(|c| c.text == "->")
                .ok_or_else(|| err(kw.offset, "expected `->` in operator declaration".into()))?;
            let args: Vec<String> = rest[..arrow].iter().map(|c| c.text.clone()).collect();
            let range = rest
                .get(arrow + 1)
                .ok_or_else(|| err(kw.offset, "missing range sort".into()))?
                .text
                .clone();
            let mut assoc = false;
            let mut comm = false;
            let mut id = None;
            let attrs = &rest[arrow + 2..];
            if !attrs.is_empty() {
                let open = attrs[0].offset;
                let last = attrs.last().unwrap();
                if !attrs[0].text.starts_with('[') || !last.text.ends_with(']') {
                    return Err(err(open, "expected attribute list in brackets".into()));
                }
                let close = last.offset + last.text.len() - 1;
                let inner = &src[open + 1..close];
                let words = chunks(inner);
                let mut j = 0;
                while j < words.len() {
                    let w = &words[j].text;
                    match w.as_str() {
                        "assoc" => assoc = true,
                        "comm" => comm = true,
                        "ctor" => {}
                        _ if w.starts_with("id:") => {
                            let mut start = open + 1 + words[j].offset + 3;
                            if w == "id:" {
                                j += 1;
                                let Some(t) = words.get(j) else {
                                    return Err(err(open, "missing identity element".into()));
                                };
                                start = open + 1 + t.offset;
                            }
                            let mut end_j = j;
                            while end_j + 1 < words.len()
                                && !["assoc", "comm", "ctor"].contains(&words[end_j + 1].text.as_str())
                            {
                                end_j += 1;
                            }
                            let end = open + 1 + words[end_j].offset + words[end_j].text.len();
                            id = Some((start, end));
                            j = end_j;
                        }
                        other => {
                            return Err(Error::UnsupportedFeature(format!("operator attribute `{other}`")));
                        }
                    }
                    j += 1;
                }
            }
            for n in names {
                m.ops.push(RawOp {
                    name: n.text.clone(),
                    args: args.clone(),
                    range: range.clone(),
                    assoc,
                    comm,
                    id,
                    offset: n.offset,
                });
            }
        }
        "var" | "vars" => {
            let colon = stmt
                .iter()
                .position(|c| c.text == ":")
                .ok_or_else(|| err(kw.offset, "expected `:` in variable declaration".into()))?;
            let sort = stmt.get(colon + 1).ok_or_else(|| err(kw.offset, "missing variable sort".into()))?;
            if colon == 0 || stmt.len() != colon + 2 {
                return Err(err(kw.offset, "malformed variable declaration".into()));
            }
            for v in &stmt[..colon] {
                m.vars.push((v.text.clone(), sort.text.clone(), v.offset));
            }
        }
        "eq" => {
            let toks = lex(&src[body.0..body.1], body.0, lines)?;
            m.eqs.push(equation_tokens(toks, kw.offset, lines)?);
        }
        other if UNSUPPORTED.contains(&other) => return Err(Error::UnsupportedFeature(other.to_string())),
        other => return Err(err(kw.offset, format!("unknown statement `{other}`"))),
    }
    Ok(())
}

fn equation_tokens(mut toks: Vec<Token>, offset: usize, lines: &LineMap) -> Result<RawEq> {
    let err = |offset: usize, msg: &str| {
        let (l, c) = lines.locate(offset);
        Error::syntax(l, c, msg)
    };
    let mut label = None;
    if toks.len() >= 4 && toks[0].tok == Tok::LBracket && toks[2].tok == Tok::RBracket && toks[3].tok == Tok::Colon {
        if let Tok::Word(w) = &toks[1].tok {
            label = Some(w.clone());
        }
        toks.drain(..4);
    }
    let mut variant = false;
    if toks.last().map(|t| &t.tok) == Some(&Tok::RBracket) {
        let mut depth = 0;
        let mut open = None;
        for k in (0..toks.len()).rev() {
            match toks[k].tok {
                Tok::RBracket => depth += 1,
                Tok::LBracket => {
                    depth -= 1;
                    if depth == 0 {
                        open = Some(k);
                        break;
                    }
                }
                _ => {}
            }
        }
        if let Some(k) = open {
            if k > 0 && toks[k - 1].tok != Tok::Colon {
                for t in &toks[k + 1..toks.len() - 1] {
                    match &t.tok {
                        Tok::Word(w) if w == "variant" => variant = true,
                        Tok::Word(w) if w == "nonexec" || w == "owise" || w == "label" => {
                            return Err(Error::UnsupportedFeature(format!("equation attribute `{w}`")));
                        }
                        _ => return Err(err(t.offset, "unknown equation attribute")),
                    }
                }
                toks.truncate(k);
            }
        }
    }
    let mut depth = 0i32;
    let mut eq_at = None;
    for (k, t) in toks.iter().enumerate() {
        match &t.tok {
            Tok::LParen => depth += 1,
            Tok::RParen => depth -= 1,
            Tok::Sym(s) if s == "=" && depth == 0 => {
                eq_at = Some(k);
                break;
            }
            _ => {}
        }
    }
    let k = eq_at.ok_or_else(|| err(offset, "expected `=` in equation"))?;
    let rhs = toks.split_off(k + 1);
    toks.pop();
    Ok(RawEq { label, lhs: toks, rhs, variant, offset })
}

fn op_syntax(name: &str, arity: usize) -> Result<Syntax> {
    if !name.contains('_') || name == "_" {
        return Ok(if arity == 0 { Syntax::Constant } else { Syntax::Prefix });
    }
    let inner = name.strip_prefix('_').and_then(|s| s.strip_suffix('_'));
    match inner {
        Some(tok) if !tok.is_empty() && !tok.contains('_') && arity == 2 => Ok(Syntax::Infix(tok.to_string())),
        _ => Err(Error::UnsupportedFeature(format!("mixfix pattern `{name}`"))),
    }
}

fn build(m: RawModule, src: &str, lines: &LineMap) -> Result<Theory> {
    let at = |offset: usize| {
        let (l, c) = lines.locate(offset);
        format!("{l}:{c}")
    };
    let mut sorts = SortGraph::new();
    for (s, _) in &m.sorts {
        sorts.add_sort(s);
    }
    for (lo, hi, off) in &m.subsorts {
        let a = sorts.lookup(lo).ok_or_else(|| Error::Signature(format!("{}: undeclared sort {lo}", at(*off))))?;
        let b = sorts.lookup(hi).ok_or_else(|| Error::Signature(format!("{}: undeclared sort {hi}", at(*off))))?;
        sorts.add_subsort(a, b);
    }
    sorts.finalize()?;

    // group declarations by name; ids follow name order
    let mut by_name: BTreeMap<String, Vec<&RawOp>> = BTreeMap::new();
    for op in &m.ops {
        by_name.entry(op.name.clone()).or_default().push(op);
    }
    let mut ops = Vec::new();
    let mut op_index = HashMap::new();
    let mut ids: Vec<Option<(usize, usize)>> = Vec::new();
    for (name, decls) in &by_name {
        let first = decls[0];
        let arity = first.args.len();
        let mut fam_decls = Vec::new();
        for d in decls {
            if d.args.len() != arity {
                return Err(Error::Signature(format!(
                    "{}: operator {name} is declared with different arities",
                    at(d.offset)
                )));
            }
            if d.assoc != first.assoc || d.comm != first.comm || d.id.is_some() != first.id.is_some() {
                return Err(Error::Signature(format!(
                    "{}: overloaded declarations of {name} disagree on axioms",
                    at(d.offset)
                )));
            }
            let lookup = |s: &String| {
                sorts.lookup(s).ok_or_else(|| Error::Signature(format!("{}: undeclared sort {s}", at(d.offset))))
            };
            let args = d.args.iter().map(lookup).collect::<Result<Vec<_>>>()?;
            let range = lookup(&d.range)?;
            fam_decls.push(OpDecl { args, range });
        }
        let arg_kinds: Vec<KindId> = fam_decls[0].args.iter().map(|&s| sorts.kind_of(s)).collect();
        let range_kind = sorts.kind_of(fam_decls[0].range);
        for d in &fam_decls[1..] {
            let ks: Vec<KindId> = d.args.iter().map(|&s| sorts.kind_of(s)).collect();
            if ks != arg_kinds || sorts.kind_of(d.range) != range_kind {
                return Err(Error::Signature(format!("overloaded declarations of {name} are in different kinds")));
            }
        }
        if first.assoc && (arity != 2 || arg_kinds.iter().any(|&k| k != range_kind)) {
            return Err(Error::Signature(format!(
                "{}: assoc operator {name} needs two arguments in the kind of its range",
                at(first.offset)
            )));
        }
        if first.comm && arity != 2 {
            return Err(Error::Signature(format!("{}: comm operator {name} must be binary", at(first.offset))));
        }
        let syntax = op_syntax(name, arity)?;
        op_index.insert(name.clone(), OpId(ops.len() as u32));
        ids.push(first.id);
        ops.push(OpFamily {
            name: name.clone(),
            arity,
            syntax,
            decls: fam_decls,
            axioms: Axioms { assoc: first.assoc, comm: first.comm, id: None },
            arg_kinds,
            range_kind,
        });
    }

    let mut vars = BTreeMap::new();
    for (v, s, off) in &m.vars {
        let sort = sorts
            .resolve(s)
            .ok_or_else(|| Error::Signature(format!("{}: undeclared sort {s} for variable {v}", at(*off))))?;
        vars.insert(v.clone(), sort);
    }

    let mut th = Theory { name: m.name, sorts, ops, op_index, vars, eqs: Vec::new() };

    for (k, id) in ids.iter().enumerate() {
        if let Some((start, end)) = *id {
            let toks = lex(&src[start..end], start, lines)?;
            let t = TermParser::new(&th, &th.vars, lines, QueryMode::Off).parse_all(&toks, start)?;
            if !t.is_ground() {
                return Err(Error::Signature(format!("{}: identity element must be ground", at(start))));
            }
            if th.kind_of_term(&t) != th.ops[k].range_kind {
                return Err(Error::Signature(format!(
                    "{}: identity of {} is in the wrong kind",
                    at(start),
                    th.ops[k].name
                )));
            }
            let t = th.canonical(&t);
            th.ops[k].axioms.id = Some(t);
        }
    }
    // identities may themselves be written with other operators
    for k in 0..th.ops.len() {
        if let Some(id) = th.ops[k].axioms.id.clone() {
            th.ops[k].axioms.id = Some(th.canonical(&id));
        }
    }

    let mut labels: Vec<String> = Vec::new();
    let declared: Vec<String> = m.eqs.iter().filter_map(|e| e.label.clone()).collect();
    let mut eqs = Vec::new();
    for (n, raw) in m.eqs.iter().enumerate() {
        let label = match &raw.label {
            Some(l) => l.clone(),
            None => {
                let mut l = format!("eq{}", n + 1);
                while declared.contains(&l) {
                    l.push('\'');
                }
                l
            }
        };
        if labels.contains(&label) {
            return Err(Error::Signature(format!("{}: duplicate equation label {label}", at(raw.offset))));
        }
        labels.push(label.clone());
        let p = TermParser::new(&th, &th.vars, lines, QueryMode::Off);
        let lhs = p.parse_all(&raw.lhs, raw.offset)?;
        let rhs = p.parse_all(&raw.rhs, raw.offset)?;
        th.check_term(&lhs).and_then(|_| th.check_term(&rhs))?;
        if lhs.is_var() {
            return Err(Error::Signature(format!("{}: equation {label} has a variable left-hand side", at(raw.offset))));
        }
        if !rhs.vars().is_subset(&lhs.vars()) {
            return Err(Error::Signature(format!(
                "{}: right-hand side of {label} has variables not in the left-hand side",
                at(raw.offset)
            )));
        }
        if th.kind_of_term(&lhs) != th.kind_of_term(&rhs) {
            return Err(Error::Signature(format!("{}: sides of {label} are in different kinds", at(raw.offset))));
        }
        eqs.push(Equation { label, lhs: th.canonical(&lhs), rhs: th.canonical(&rhs), variant: raw.variant });
    }
    th.eqs = eqs;
    Ok(th)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum QueryMode {
    Off,
    On,
}

/// A query pattern: `_` matches anything, `?` matches anything and marks
/// the matched subterm for highlighting.
#[derive(Clone, Debug)]
pub struct QueryPattern {
    pub term: Term,
    /// The pattern before canonical argument ordering.
    pub written: Term,
    /// Variables standing for `?` wildcards, left to right.
    pub captures: Vec<Var>,
    /// Variables standing for `_` wildcards.
    pub anonymous: Vec<Var>,
}

struct TermParser<'a> {
    th: &'a Theory,
    vars: &'a BTreeMap<String, SortRef>,
    lines: &'a LineMap,
    query: QueryMode,
    wildcards: std::cell::RefCell<Vec<(Var, bool)>>,
}

impl<'a> TermParser<'a> {
    fn new(th: &'a Theory, vars: &'a BTreeMap<String, SortRef>, lines: &'a LineMap, query: QueryMode) -> Self {
        TermParser { th, vars, lines, query, wildcards: Default::default() }
    }

    fn err(&self, offset: usize, msg: impl Into<String>) -> Error {
        let (l, c) = self.lines.locate(offset);
        Error::syntax(l, c, msg)
    }

    fn parse_all(&self, toks: &[Token], fallback_offset: usize) -> Result<Term> {
        if toks.is_empty() {
            return Err(self.err(fallback_offset, "expected a term"));
        }
        let mut pos = 0;
        let t = self.term(toks, &mut pos, None)?;
        if pos < toks.len() {
            return Err(self.err(toks[pos].offset, "unexpected token after term"));
        }
        Ok(t)
    }

    fn infix_op(&self, tok: &Tok) -> Option<OpId> {
        let text = match tok {
            Tok::Sym(s) | Tok::Word(s) => s,
            _ => return None,
        };
        self.th.op_named(&format!("_{text}_"))
    }

    fn term(&self, toks: &[Token], pos: &mut usize, expected: Option<KindId>) -> Result<Term> {
        let start = toks.get(*pos).map(|t| t.offset).unwrap_or(0);
        // the operator of a chain is only known after the first operand
        let first_peek = self.peek_chain_op(toks, *pos);
        let operand_kind = first_peek.map(|f| self.th.op(f).arg_kinds[0]).or(expected);
        let mut operands = vec![self.operand(toks, pos, operand_kind)?];
        let mut chain: Option<OpId> = None;
        while let Some(t) = toks.get(*pos) {
            let Some(f) = self.infix_op(&t.tok) else { break };
            if let Some(g) = chain {
                if g != f {
                    return Err(self.err(t.offset, "mixed infix operators need parentheses"));
                }
                if !self.th.axioms(f).assoc {
                    return Err(self.err(t.offset, format!("{} is not associative; add parentheses", self.th.op(f).name)));
                }
            }
            chain = Some(f);
            *pos += 1;
            let k = self.th.op(f).arg_kinds[1];
            operands.push(self.operand(toks, pos, Some(k))?);
        }
        match chain {
            None => Ok(operands.pop().unwrap()),
            Some(f) => {
                let t = if operands.len() == 2 || self.th.axioms(f).assoc {
                    if operands.len() == 2 {
                        Term::App(f, operands)
                    } else {
                        // right-nested binary applications
                        let mut it = operands.into_iter().rev();
                        let mut acc = it.next().unwrap();
                        for o in it {
                            acc = Term::App(f, vec![o, acc]);
                        }
                        acc
                    }
                } else {
                    return Err(self.err(start, "ambiguous infix chain"));
                };
                Ok(t)
            }
        }
    }

    /// Finds the infix operator following the first operand, if any.
    fn peek_chain_op(&self, toks: &[Token], mut pos: usize) -> Option<OpId> {
        let mut depth = 0i32;
        while let Some(t) = toks.get(pos) {
            match &t.tok {
                Tok::LParen | Tok::LBracket => depth += 1,
                Tok::RParen | Tok::RBracket => {
                    depth -= 1;
                    if depth < 0 {
                        return None;
                    }
                }
                Tok::Comma if depth == 0 => return None,
                tok if depth == 0 && pos > 0 => {
                    if let Some(f) = self.infix_op(tok) {
                        // a word may be both an operand and an infix token
                        let prev = &toks[pos - 1].tok;
                        if !matches!(prev, Tok::Colon) && !self.infix_op(prev).is_some() {
                            return Some(f);
                        }
                    }
                }
                _ => {}
            }
            pos += 1;
        }
        None
    }

    fn sort_annotation(&self, toks: &[Token], pos: &mut usize) -> Result<SortRef> {
        let at = toks.get(*pos).map(|t| t.offset).unwrap_or(0);
        let text = match toks.get(*pos).map(|t| &t.tok) {
            Some(Tok::Word(w)) => {
                *pos += 1;
                w.clone()
            }
            Some(Tok::LBracket) => {
                let name = match toks.get(*pos + 1).map(|t| &t.tok) {
                    Some(Tok::Word(w)) => w.clone(),
                    _ => return Err(self.err(at, "expected a sort name inside brackets")),
                };
                if toks.get(*pos + 2).map(|t| &t.tok) != Some(&Tok::RBracket) {
                    return Err(self.err(at, "expected `]`"));
                }
                *pos += 3;
                format!("[{name}]")
            }
            _ => return Err(self.err(at, "expected a sort")),
        };
        self.th.sorts.resolve(&text).ok_or_else(|| self.err(at, format!("unknown sort {text}")))
    }

    fn wildcard(&self, capture: bool, kind: Option<KindId>, offset: usize) -> Result<Term> {
        let kind = kind.ok_or_else(|| self.err(offset, "cannot infer the kind of a wildcard here"))?;
        let mut w = self.wildcards.borrow_mut();
        let name = format!("{}{}", if capture { "?" } else { "_" }, w.len() + 1);
        let v = Var::user(&name, SortRef::Kind(kind));
        w.push((v.clone(), capture));
        Ok(Term::Var(v))
    }

    fn operand(&self, toks: &[Token], pos: &mut usize, expected: Option<KindId>) -> Result<Term> {
        let Some(tok) = toks.get(*pos) else {
            let off = toks.last().map(|t| t.offset).unwrap_or(0);
            return Err(self.err(off, "unexpected end of term"));
        };
        let offset = tok.offset;
        match &tok.tok {
            Tok::LParen => {
                *pos += 1;
                let t = self.term(toks, pos, expected)?;
                match toks.get(*pos) {
                    Some(Token { tok: Tok::RParen, .. }) => {
                        *pos += 1;
                        Ok(t)
                    }
                    _ => Err(self.err(offset, "unbalanced parenthesis")),
                }
            }
            Tok::Sym(s) if s == "?" && self.query == QueryMode::On => {
                *pos += 1;
                self.wildcard(true, expected, offset)
            }
            Tok::Word(w) if w == "_" && self.query == QueryMode::On => {
                *pos += 1;
                self.wildcard(false, expected, offset)
            }
            Tok::Word(w) => {
                *pos += 1;
                let next = toks.get(*pos).map(|t| &t.tok);
                if next == Some(&Tok::Colon) {
                    *pos += 1;
                    let sort = self.sort_annotation(toks, pos)?;
                    return Ok(Term::Var(var_from_label(w, sort)));
                }
                if next == Some(&Tok::LParen) {
                    if let Some(f) = self.th.op_named(w) {
                        let fam = self.th.op(f);
                        if fam.syntax == Syntax::Prefix {
                            *pos += 1;
                            let mut args = Vec::new();
                            loop {
                                let k = fam.arg_kinds.get(args.len()).copied();
                                args.push(self.term(toks, pos, k)?);
                                match toks.get(*pos).map(|t| &t.tok) {
                                    Some(Tok::Comma) => *pos += 1,
                                    Some(Tok::RParen) => {
                                        *pos += 1;
                                        break;
                                    }
                                    _ => return Err(self.err(offset, format!("expected `,` or `)` in arguments of {w}"))),
                                }
                            }
                            if args.len() != fam.arity {
                                return Err(self.err(
                                    offset,
                                    format!("{w} expects {} arguments, got {}", fam.arity, args.len()),
                                ));
                            }
                            return Ok(Term::App(f, args));
                        }
                    }
                }
                if let Some(f) = self.th.op_named(w) {
                    if self.th.op(f).syntax == Syntax::Constant {
                        return Ok(Term::constant(f));
                    }
                }
                if let Some(&sort) = self.vars.get(w.as_str()) {
                    return Ok(Term::Var(Var::user(w, sort)));
                }
                Err(self.err(offset, format!("unknown symbol `{w}`")))
            }
            _ => Err(self.err(offset, "expected a term")),
        }
    }
}

/// `X`, `#3` or `%3` with the given sort.
fn var_from_label(label: &str, sort: SortRef) -> Var {
    use crate::term::VarClass;
    let fresh = |prefix: char, class: VarClass| {
        label
            .strip_prefix(prefix)
            .and_then(|n| n.parse::<u32>().ok())
            .filter(|&n| n >= 1)
            .map(|n| Var::fresh(class, n, sort))
    };
    fresh('#', VarClass::Unif)
        .or_else(|| fresh('%', VarClass::Variant))
        .unwrap_or_else(|| Var::user(label, sort))
}

/// Parses a term using the theory's declared variables.
pub fn parse_term(text: &str, th: &Theory) -> Result<Term> {
    parse_term_with(text, th, &th.vars)
}

/// Parses a term against an explicit variable table.
pub fn parse_term_with(text: &str, th: &Theory, vars: &BTreeMap<String, SortRef>) -> Result<Term> {
    let lines = LineMap::new(text);
    let toks = lex(text, 0, &lines)?;
    let t = TermParser::new(th, vars, &lines, QueryMode::Off).parse_all(&toks, 0)?;
    th.check_term(&t)?;
    Ok(t)
}

/// Parses a query pattern with `_` and `?` wildcards.
pub fn parse_query(text: &str, th: &Theory) -> Result<QueryPattern> {
    let lines = LineMap::new(text);
    let toks = lex(text, 0, &lines)?;
    let trimmed: Vec<&Tok> = toks.iter().map(|t| &t.tok).collect();
    // a lone wildcard matches every term of every kind
    if trimmed == [&Tok::Sym("?".into())] || trimmed == [&Tok::Word("_".into())] {
        let capture = trimmed[0] == &Tok::Sym("?".into());
        let v = Var::user(if capture { "?1" } else { "_1" }, SortRef::Kind(KindId(0)));
        return Ok(QueryPattern {
            term: Term::Var(v.clone()),
            written: Term::Var(v.clone()),
            captures: if capture { vec![v.clone()] } else { vec![] },
            anonymous: if capture { vec![] } else { vec![v] },
        });
    }
    let p = TermParser::new(th, &th.vars, &lines, QueryMode::On);
    let term = p.parse_all(&toks, 0)?;
    th.check_term(&term)?;
    let ws = p.wildcards.into_inner();
    Ok(QueryPattern {
        written: term.clone(),
        term: th.canonical(&term),
        captures: ws.iter().filter(|(_, c)| *c).map(|(v, _)| v.clone()).collect(),
        anonymous: ws.iter().filter(|(_, c)| !*c).map(|(v, _)| v.clone()).collect(),
    })
}
