//! Quadratic presentations and their text format.
//!
//! ```text
//! operad Lie
//! gen l arity 2 sign
//! rel l(x1,l(x2,x3)) + l(x3,l(x1,x2)) + l(x2,l(x3,x1))
//! ```
//!
//! Besides `trivial`, `sign` and `regular`, a generator may be declared with
//! `dim <d>` and explicit matrices `act <name> s<i> [[..],..]` (row-major,
//! column j is the image of basis vector j). `name.j` refers to the j-th
//! basis element of a generator (1-based; a bare name means `name.1`).

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::free::{FreeBasisElem, FreeOperad};
use super::symseq::SymSequence;
use crate::combinatorics::{full_mask, Mask, Permutation};
use crate::error::{OpkError, Result};
use crate::exact_linalg::{gcd, sparse, CoefficientRing, ColumnEchelon, ExactMatrix, Scalar, SparseVec};
use crate::trees::Child;

const Q: CoefficientRing = CoefficientRing::Rationals;

/// Symmetry of a generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Symmetry {
    Trivial,
    Sign,
    Regular,
    /// Row-major integer matrices of s_1, …, s_{k−1}.
    Explicit { dim: usize, matrices: Vec<Vec<Vec<i64>>> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorDecl {
    pub name: String,
    pub arity: usize,
    pub symmetry: Symmetry,
}

impl GeneratorDecl {
    pub fn dim(&self) -> usize {
        match &self.symmetry {
            Symmetry::Trivial | Symmetry::Sign => 1,
            Symmetry::Regular => (1..=self.arity).product(),
            Symmetry::Explicit { dim, .. } => *dim,
        }
    }

    fn module(&self, ring: CoefficientRing, max_arity: usize) -> Result<SymSequence> {
        let k = self.arity;
        match &self.symmetry {
            Symmetry::Trivial => SymSequence::trivial(ring, k, max_arity),
            Symmetry::Sign => SymSequence::sign(ring, k, max_arity),
            Symmetry::Regular => SymSequence::regular(ring, k, max_arity),
            Symmetry::Explicit { dim, matrices } => {
                let gens = matrices
                    .iter()
                    .map(|rows| {
                        let entries = rows
                            .iter()
                            .enumerate()
                            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, &x)| (i, j, ring.from_int(x))));
                        ExactMatrix::from_entries(ring, *dim, *dim, entries)
                    })
                    .collect();
                SymSequence::zero(ring, max_arity).with_component(k, gens, vec![0; *dim], vec![0; *dim])
            }
        }
    }
}

/// An element of F_(2)(M)(k) with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub arity: usize,
    pub terms: Vec<(FreeBasisElem, Scalar)>,
}

/// Generators M with M(0) = M(1) = 0, placed in weight 1, and quadratic
/// relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticPresentation {
    name: String,
    generators: Vec<GeneratorDecl>,
    relations: Vec<Relation>,
}

impl QuadraticPresentation {
    pub fn new(name: impl Into<String>, generators: Vec<GeneratorDecl>, relations: Vec<Relation>) -> Result<Self> {
        let p = QuadraticPresentation {
            name: name.into(),
            generators,
            relations,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let mut names = std::collections::HashSet::new();
        for g in &self.generators {
            if g.arity < 2 {
                return Err(OpkError::arg(format!("generator {} must have arity ≥ 2", g.name)));
            }
            if !names.insert(&g.name) {
                return Err(OpkError::arg(format!("generator {} declared twice", g.name)));
            }
            g.module(Q, g.arity)?;
        }
        let ranks = self.ranks();
        for r in &self.relations {
            for (t, _) in &r.terms {
                let ok = t.arity() == r.arity
                    && t.weight() == 2
                    && (0..2).all(|v| (t.labels[v] as usize) < ranks.get(t.tree.children(v).len()).copied().unwrap_or(0));
                if !ok {
                    return Err(OpkError::arg("relation terms must be 2-vertex treewise tensors of the relation arity"));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[GeneratorDecl] {
        &self.generators
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// Largest generator arity (0 without generators).
    pub fn max_generator_arity(&self) -> usize {
        self.generators.iter().map(|g| g.arity).max().unwrap_or(0)
    }

    fn ranks(&self) -> Vec<usize> {
        let mut out = vec![0; self.max_generator_arity() + 1];
        for g in &self.generators {
            out[g.arity] += g.dim();
        }
        out
    }

    /// The generators as a Σ*-module in weight 1. Generators of one arity
    /// are stacked in declaration order.
    pub fn generator_module(&self, ring: CoefficientRing, max_arity: usize) -> Result<SymSequence> {
        let mut m = SymSequence::zero(ring, max_arity);
        for g in self.generators.iter().filter(|g| g.arity <= max_arity) {
            m = m.direct_sum(&g.module(ring, max_arity)?)?;
        }
        Ok(m.with_grading(0, 1))
    }

    /// Generator name and 0-based basis index of a label in arity `k`.
    fn label_name(&self, k: usize, label: usize) -> (&str, usize) {
        let mut offset = 0;
        for g in self.generators.iter().filter(|g| g.arity == k) {
            if label < offset + g.dim() {
                return (&g.name, label - offset);
            }
            offset += g.dim();
        }
        unreachable!("label out of range")
    }

    /// Relations of arity k as vectors of F(M)(k)_(2) over the ring of
    /// `free`. Over ℤ each relation is scaled to a primitive integer vector.
    pub fn relation_vectors(&self, free: &FreeOperad, k: usize) -> Result<Vec<SparseVec>> {
        let ring = free.ring();
        let comp = free.component(k, 2);
        let mut out = Vec::new();
        for r in self.relations.iter().filter(|r| r.arity == k) {
            let coeffs: Vec<Scalar> = match ring {
                CoefficientRing::Integers => primitive(r.terms.iter().map(|t| t.1).collect()),
                _ => r
                    .terms
                    .iter()
                    .map(|t| ring.from_fraction(t.1.numer(), t.1.denom()))
                    .collect::<Result<_>>()?,
            };
            let v = sparse::collect(
                ring,
                r.terms.iter().zip(coeffs).map(|((e, _), c)| {
                    (comp.index_of(e).expect("relation terms lie in the free operad"), c)
                }),
            );
            if !v.is_empty() {
                out.push(v);
            }
        }
        Ok(out)
    }

    /// A spanning set of the Σ_k-submodule generated by the arity-k
    /// relations: the orbit under s_1, …, s_{k−1}, keeping only vectors
    /// that enlarge the span.
    pub fn relation_span(&self, free: &FreeOperad, k: usize) -> Result<Vec<SparseVec>> {
        let ring = free.ring();
        let comp = free.component(k, 2);
        let mut span = ColumnEchelon::empty(ring, comp.len(), false);
        let mut kept: Vec<SparseVec> = Vec::new();
        let mut queue: Vec<SparseVec> = Vec::new();
        for v in self.relation_vectors(free, k)? {
            if !span.contains(&v) {
                span.push(v.clone());
                queue.push(v.clone());
                kept.push(v);
            }
        }
        let gens: Vec<Permutation> = (1..k).map(|i| Permutation::simple(k, i)).collect::<Result<_>>()?;
        while let Some(v) = queue.pop() {
            for s in &gens {
                let image = act_vector(free, k, s, &v);
                if !span.contains(&image) {
                    span.push(image.clone());
                    queue.push(image.clone());
                    kept.push(image);
                }
            }
        }
        Ok(kept)
    }

    /// Rank of the Σ-closed relation space in each arity, over ℚ.
    pub fn relation_dimensions(&self) -> Result<BTreeMap<usize, usize>> {
        let k_max = self.relations.iter().map(|r| r.arity).max().unwrap_or(0);
        let mut out = BTreeMap::new();
        if k_max == 0 {
            return Ok(out);
        }
        let free = FreeOperad::new(self.generator_module(Q, k_max)?, k_max)?;
        for k in self.relations.iter().map(|r| r.arity) {
            if let std::collections::btree_map::Entry::Vacant(e) = out.entry(k) {
                let span = self.relation_span(&free, k)?;
                let m = ExactMatrix::from_columns(Q, free.component(k, 2).len(), span);
                e.insert(crate::exact_linalg::rank(&m));
            }
        }
        Ok(out)
    }

    /// Text form accepted by [`parse_presentation`].
    pub fn to_dsl(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "operad {}", self.name);
        for g in &self.generators {
            match &g.symmetry {
                Symmetry::Trivial => {
                    let _ = writeln!(s, "gen {} arity {} trivial", g.name, g.arity);
                }
                Symmetry::Sign => {
                    let _ = writeln!(s, "gen {} arity {} sign", g.name, g.arity);
                }
                Symmetry::Regular => {
                    let _ = writeln!(s, "gen {} arity {} regular", g.name, g.arity);
                }
                Symmetry::Explicit { dim, matrices } => {
                    let _ = writeln!(s, "gen {} arity {} dim {}", g.name, g.arity, dim);
                    for (i, m) in matrices.iter().enumerate() {
                        let rows: Vec<String> = m
                            .iter()
                            .map(|r| format!("[{}]", r.iter().map(i64::to_string).collect::<Vec<_>>().join(",")))
                            .collect();
                        let _ = writeln!(s, "act {} s{} [{}]", g.name, i + 1, rows.join(","));
                    }
                }
            }
        }
        for r in &self.relations {
            let mut line = String::from("rel");
            for (i, (t, c)) in r.terms.iter().enumerate() {
                let neg = c.numer() < 0;
                let abs = if neg { Q.neg(*c) } else { *c };
                match (i, neg) {
                    (0, true) => line.push_str(" -"),
                    (0, false) => {}
                    (_, true) => line.push_str(" -"),
                    (_, false) => line.push_str(" +"),
                }
                line.push(' ');
                if abs != Scalar::ONE {
                    let _ = write!(line, "{abs}*");
                }
                line.push_str(&self.term_text(t, 0));
            }
            if r.terms.is_empty() {
                continue;
            }
            s.push_str(&line);
            s.push('\n');
        }
        s
    }

    fn term_text(&self, t: &FreeBasisElem, v: usize) -> String {
        let children = t.tree.children(v);
        let (name, j) = self.label_name(children.len(), t.labels[v] as usize);
        let head = if j == 0 { name.to_string() } else { format!("{name}.{}", j + 1) };
        let args: Vec<String> = children
            .into_iter()
            .map(|c| match c {
                Child::Leaf(k) => format!("x{}", k + 1),
                Child::Vertex(u) => self.term_text(t, u),
            })
            .collect();
        format!("{head}({})", args.join(","))
    }
}

fn primitive(c: Vec<Scalar>) -> Vec<Scalar> {
    let l = c.iter().fold(1i64, |acc, x| acc / gcd(acc, x.denom()) * x.denom());
    let ints: Vec<i64> = c.iter().map(|x| x.numer() * (l / x.denom())).collect();
    let g = ints.iter().fold(0, |acc, &x| gcd(acc, x)).max(1);
    ints.into_iter().map(|x| Scalar::int(x / g)).collect()
}

/// `w_*` on a vector of F(M)(k)_(2).
fn act_vector(free: &FreeOperad, k: usize, w: &Permutation, v: &[(usize, Scalar)]) -> SparseVec {
    let ring = free.ring();
    let comp = free.component(k, 2);
    let mut terms = Vec::new();
    for &(j, c) in v {
        for (e, x) in free.act(w, &comp.elems()[j]) {
            terms.push((comp.index_of(&e).expect("component is Σ-stable"), ring.mul(c, x)));
        }
    }
    sparse::collect(ring, terms)
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(i64),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    col: usize,
}

fn lex(line: &str, lineno: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || "_.!'".contains(chars[i])) {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                col,
            });
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse().map_err(|_| OpkError::parse(lineno, col, format!("number {s} out of range")))?;
            out.push(Token { tok: Tok::Num(n), col });
        } else if "()[],*+-/;".contains(c) {
            out.push(Token { tok: Tok::Sym(c), col });
            i += 1;
        } else if c == '−' {
            out.push(Token { tok: Tok::Sym('-'), col });
            i += 1;
        } else {
            return Err(OpkError::parse(lineno, col, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.col)
    }

    fn err(&self, msg: impl Into<String>) -> OpkError {
        OpkError::parse(self.line, self.col(), msg)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(Tok::Sym(x)) if *x == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected '{c}'"))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected '{kw}'"))),
        }
    }

    fn number(&mut self) -> Result<i64> {
        let neg = matches!(self.peek(), Some(Tok::Sym('-')));
        if neg {
            self.pos += 1;
        }
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(if neg { -n } else { n })
            }
            _ => Err(self.err("expected a number")),
        }
    }

    fn done(&self) -> Result<()> {
        if self.pos < self.toks.len() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
enum Arg {
    Var(usize, usize),
    App(App),
}

#[derive(Clone, Debug)]
struct App {
    name: String,
    col: usize,
    args: Vec<Arg>,
}

fn parse_app(c: &mut Cursor) -> Result<App> {
    let col = c.col();
    let name = c.ident("a generator")?;
    c.expect_sym('(')?;
    let mut args = Vec::new();
    loop {
        let acol = c.col();
        match c.peek() {
            Some(Tok::Ident(s)) if s.starts_with('x') && s[1..].chars().all(|d| d.is_ascii_digit()) && s.len() > 1 => {
                let k: usize = s[1..].parse().map_err(|_| c.err("bad variable"))?;
                if k == 0 {
                    return Err(c.err("variables are numbered from x1"));
                }
                c.pos += 1;
                args.push(Arg::Var(k, acol));
            }
            Some(Tok::Ident(_)) => args.push(Arg::App(parse_app(c)?)),
            _ => return Err(c.err("expected a variable or an application")),
        }
        match c.next() {
            Some(Tok::Sym(',')) => continue,
            Some(Tok::Sym(')')) => break,
            _ => {
                c.pos -= 1;
                return Err(c.err("expected ',' or ')'"));
            }
        }
    }
    Ok(App { name, col, args })
}

/// Parsed-but-unelaborated relation line.
struct RelSource {
    line: usize,
    terms: Vec<(Scalar, App)>,
}

fn parse_rel(c: &mut Cursor) -> Result<RelSource> {
    let mut terms = Vec::new();
    let mut first = true;
    while c.peek().is_some() {
        let mut neg = false;
        match c.peek() {
            Some(Tok::Sym('+')) => c.pos += 1,
            Some(Tok::Sym('-')) => {
                neg = true;
                c.pos += 1;
            }
            _ if first => {}
            _ => return Err(c.err("expected '+' or '-' between terms")),
        }
        first = false;
        let mut coeff = Scalar::ONE;
        if let Some(Tok::Num(n)) = c.peek() {
            let num = *n;
            c.pos += 1;
            let mut den = 1;
            if let Some(Tok::Sym('/')) = c.peek() {
                c.pos += 1;
                match c.next() {
                    Some(Tok::Num(d)) if d != 0 => den = d,
                    _ => {
                        c.pos -= 1;
                        return Err(c.err("expected a nonzero denominator"));
                    }
                }
            }
            coeff = Q.from_fraction(num, den).map_err(|e| c.err(e.to_string()))?;
            c.expect_sym('*')?;
        }
        if neg {
            coeff = Q.neg(coeff);
        }
        terms.push((coeff, parse_app(c)?));
    }
    if terms.is_empty() {
        return Err(c.err("empty relation"));
    }
    Ok(RelSource { line: c.line, terms })
}

fn parse_matrix(c: &mut Cursor) -> Result<Vec<Vec<i64>>> {
    c.expect_sym('[')?;
    let mut rows = Vec::new();
    loop {
        c.expect_sym('[')?;
        let mut row = Vec::new();
        loop {
            row.push(c.number()?);
            match c.next() {
                Some(Tok::Sym(',')) => continue,
                Some(Tok::Sym(']')) => break,
                _ => {
                    c.pos -= 1;
                    return Err(c.err("expected ',' or ']'"));
                }
            }
        }
        rows.push(row);
        match c.next() {
            Some(Tok::Sym(',')) => continue,
            Some(Tok::Sym(']')) => break,
            _ => {
                c.pos -= 1;
                return Err(c.err("expected ',' or ']'"));
            }
        }
    }
    Ok(rows)
}

struct GenSource {
    decl: GeneratorDecl,
    line: usize,
    col: usize,
    acts: BTreeMap<usize, Vec<Vec<i64>>>,
}

/// Parses a presentation; `;` separates declarations like a line break.
pub fn parse_presentation(text: &str) -> Result<QuadraticPresentation> {
    let mut name: Option<String> = None;
    let mut gens: Vec<GenSource> = Vec::new();
    let mut rels: Vec<RelSource> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let toks = lex(raw, lineno)?;
        for stmt in toks.split(|t| t.tok == Tok::Sym(';')) {
            if stmt.is_empty() {
                continue;
            }
            let mut c = Cursor {
                toks: stmt,
                pos: 0,
                line: lineno,
                end_col: raw.chars().count() + 1,
            };
            let kw_col = c.col();
            let kw = c.ident("a declaration")?;
            match kw.as_str() {
                "operad" => {
                    if name.is_some() {
                        return Err(OpkError::parse(lineno, kw_col, "duplicate operad declaration"));
                    }
                    name = Some(c.ident("an operad name")?);
                    c.done()?;
                }
                "gen" => {
                    let col = c.col();
                    let gname = c.ident("a generator name")?;
                    if gname.contains('.') || (gname.starts_with('x') && gname[1..].chars().all(|d| d.is_ascii_digit())) {
                        return Err(OpkError::parse(lineno, col, format!("invalid generator name {gname}")));
                    }
                    if gens.iter().any(|g| g.decl.name == gname) {
                        return Err(OpkError::parse(lineno, col, format!("generator {gname} declared twice")));
                    }
                    c.keyword("arity")?;
                    let acol = c.col();
                    let arity = c.number()?;
                    if arity < 2 {
                        return Err(OpkError::parse(lineno, acol, "generators need arity ≥ 2"));
                    }
                    let scol = c.col();
                    let sym = c.ident("trivial, sign, regular or dim")?;
                    let symmetry = match sym.as_str() {
                        "trivial" => Symmetry::Trivial,
                        "sign" => Symmetry::Sign,
                        "regular" => Symmetry::Regular,
                        "dim" => {
                            let dcol = c.col();
                            let d = c.number()?;
                            if d < 1 {
                                return Err(OpkError::parse(lineno, dcol, "dimension must be positive"));
                            }
                            Symmetry::Explicit {
                                dim: d as usize,
                                matrices: Vec::new(),
                            }
                        }
                        other => return Err(OpkError::parse(lineno, scol, format!("unknown symmetry '{other}'"))),
                    };
                    c.done()?;
                    gens.push(GenSource {
                        decl: GeneratorDecl {
                            name: gname,
                            arity: arity as usize,
                            symmetry,
                        },
                        line: lineno,
                        col,
                        acts: BTreeMap::new(),
                    });
                }
                "act" => {
                    let col = c.col();
                    let gname = c.ident("a generator name")?;
                    let Some(g) = gens.iter_mut().find(|g| g.decl.name == gname) else {
                        return Err(OpkError::parse(lineno, col, format!("unknown generator {gname}")));
                    };
                    let Symmetry::Explicit { dim, .. } = g.decl.symmetry else {
                        return Err(OpkError::parse(lineno, col, format!("{gname} was not declared with 'dim'")));
                    };
                    let scol = c.col();
                    let s = c.ident("a simple transposition s<i>")?;
                    let i: usize = s
                        .strip_prefix('s')
                        .and_then(|x| x.parse().ok())
                        .filter(|&i| i >= 1 && i < g.decl.arity)
                        .ok_or_else(|| OpkError::parse(lineno, scol, format!("no transposition {s} in arity {}", g.decl.arity)))?;
                    let mcol = c.col();
                    let m = parse_matrix(&mut c)?;
                    if m.len() != dim || m.iter().any(|r| r.len() != dim) {
                        return Err(OpkError::parse(lineno, mcol, format!("expected a {dim}×{dim} matrix")));
                    }
                    c.done()?;
                    if g.acts.insert(i, m).is_some() {
                        return Err(OpkError::parse(lineno, scol, format!("s{i} given twice for {gname}")));
                    }
                }
                "rel" => rels.push(parse_rel(&mut c)?),
                other => return Err(OpkError::parse(lineno, kw_col, format!("unknown declaration '{other}'"))),
            }
        }
    }
    let mut decls = Vec::new();
    for g in gens {
        let mut decl = g.decl;
        if let Symmetry::Explicit { dim, .. } = decl.symmetry {
            if g.acts.len() != decl.arity - 1 {
                return Err(OpkError::parse(
                    g.line,
                    g.col,
                    format!("{} needs matrices for s1..s{}", decl.name, decl.arity - 1),
                ));
            }
            decl.symmetry = Symmetry::Explicit {
                dim,
                matrices: g.acts.into_values().collect(),
            };
            decl.module(Q, decl.arity)
                .map_err(|e| OpkError::parse(g.line, g.col, e.to_string()))?;
        }
        decls.push(decl);
    }
    let pres = QuadraticPresentation {
        name: name.unwrap_or_else(|| "P".into()),
        generators: decls,
        relations: Vec::new(),
    };
    let relations = rels.iter().map(|r| elaborate(&pres, r)).collect::<Result<_>>()?;
    QuadraticPresentation::new(pres.name, pres.generators, relations)
}

/// Resolves `name` or `name.j` to (arity, label index in M(arity)).
fn resolve(pres: &QuadraticPresentation, name: &str) -> Option<(usize, usize)> {
    let (base, j) = match name.split_once('.') {
        Some((b, j)) => (b, j.parse::<usize>().ok().filter(|&j| j >= 1)? - 1),
        None => (name, 0),
    };
    let g = pres.generators.iter().find(|g| g.name == base)?;
    if j >= g.dim() {
        return None;
    }
    let offset: usize = pres
        .generators
        .iter()
        .take_while(|h| h.name != base)
        .filter(|h| h.arity == g.arity)
        .map(GeneratorDecl::dim)
        .sum();
    Some((g.arity, offset + j))
}

fn elaborate(pres: &QuadraticPresentation, src: &RelSource) -> Result<Relation> {
    let line = src.line;
    let mut arity = None;
    let mut terms: Vec<(FreeBasisElem, Scalar)> = Vec::new();
    let max_k = pres.max_generator_arity().max(2);
    let module = pres.generator_module(Q, max_k)?;
    for (coeff, app) in &src.terms {
        let (a, outer) = resolve(pres, &app.name)
            .ok_or_else(|| OpkError::parse(line, app.col, format!("unknown generator {}", app.name)))?;
        if app.args.len() != a {
            return Err(OpkError::parse(line, app.col, format!("{} takes {a} arguments", app.name)));
        }
        let inner_apps: Vec<&App> = app
            .args
            .iter()
            .filter_map(|x| match x {
                Arg::App(b) => Some(b),
                Arg::Var(..) => None,
            })
            .collect();
        if inner_apps.len() != 1 {
            return Err(OpkError::parse(line, app.col, "each monomial needs exactly two generator applications"));
        }
        let inner = inner_apps[0];
        let (c, inner_label) = resolve(pres, &inner.name)
            .ok_or_else(|| OpkError::parse(line, inner.col, format!("unknown generator {}", inner.name)))?;
        if inner.args.len() != c {
            return Err(OpkError::parse(line, inner.col, format!("{} takes {c} arguments", inner.name)));
        }
        let mut inner_vars = Vec::new();
        for x in &inner.args {
            match x {
                Arg::Var(k, _) => inner_vars.push(*k),
                Arg::App(b) => return Err(OpkError::parse(line, b.col, "nesting deeper than two applications")),
            }
        }
        let k = a + c - 1;
        if *arity.get_or_insert(k) != k {
            return Err(OpkError::parse(line, app.col, "relation is not homogeneous in arity"));
        }
        let mut seen = vec![false; k + 1];
        let all_vars = app
            .args
            .iter()
            .filter_map(|x| match x {
                Arg::Var(v, col) => Some((*v, *col)),
                Arg::App(_) => None,
            })
            .chain(inner.args.iter().map(|x| match x {
                Arg::Var(v, col) => (*v, *col),
                Arg::App(_) => unreachable!(),
            }));
        for (v, col) in all_vars {
            if v > k || seen[v] {
                return Err(OpkError::parse(line, col, format!("variables must be x1..x{k}, each used once")));
            }
            seen[v] = true;
        }
        let inner_mask: Mask = inner_vars.iter().fold(0, |m, &v| m | 1 << (v - 1));
        let sigma = Permutation::ranking(&inner_vars);
        let mins: Vec<usize> = app
            .args
            .iter()
            .map(|x| match x {
                Arg::Var(v, _) => *v,
                Arg::App(_) => *inner_vars.iter().min().expect("nonempty"),
            })
            .collect();
        let pi = Permutation::ranking(&mins);
        let outer_vec = module.act_vec(a, &pi, &[(outer, Scalar::ONE)])?;
        let inner_vec = module.act_vec(c, &sigma, &[(inner_label, Scalar::ONE)])?;
        for &(x, s) in &outer_vec {
            for &(y, t) in &inner_vec {
                let e = FreeBasisElem::from_vertices(k, vec![(full_mask(k), x as u32), (inner_mask, y as u32)]);
                terms.push((e, Q.mul(*coeff, Q.mul(s, t))));
            }
        }
    }
    let mut merged: HashMap<FreeBasisElem, Scalar> = HashMap::new();
    for (e, c) in terms {
        let entry = merged.entry(e).or_insert(Scalar::ZERO);
        *entry = Q.add(*entry, c);
    }
    let mut terms: Vec<(FreeBasisElem, Scalar)> = merged.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    terms.sort();
    Ok(Relation {
        arity: arity.expect("at least one term"),
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutative_relation_closure() {
        let p = parse_presentation("operad Com\ngen m arity 2 trivial\nrel m(m(x1,x2),x3) − m(x1,m(x2,x3))").unwrap();
        assert_eq!(p.generators().len(), 1);
        assert_eq!(p.relation_dimensions().unwrap()[&3], 2);
    }

    #[test]
    fn jacobi_closure_is_one_dimensional() {
        let p = parse_presentation("gen l arity 2 sign; rel l(x1,l(x2,x3)) + l(x3,l(x1,x2)) + l(x2,l(x3,x1))").unwrap();
        assert_eq!(p.relations()[0].terms.len(), 3);
        assert_eq!(p.relation_dimensions().unwrap()[&3], 1);
    }

    #[test]
    fn empty_relations_and_round_trip() {
        let p = parse_presentation("operad F\ngen g arity 2 dim 2\nact g s1 [[0,1],[1,0]]\n").unwrap();
        assert!(p.relations().is_empty());
        assert_eq!(parse_presentation(&p.to_dsl()).unwrap(), p);
        let q = parse_presentation("gen m arity 2 regular\nrel 2*m(m(x1,x2),x3) - 1/2*m.2(x1,m(x2,x3))").unwrap();
        assert_eq!(parse_presentation(&q.to_dsl()).unwrap().relations(), q.relations());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_presentation("gen m arity 2 trivial\nrel m(m(x1,x2),x3) - n(x1,m(x2,x3))").unwrap_err();
        assert_eq!(
            e,
            OpkError::Parse {
                line: 2,
                column: 22,
                message: "unknown generator n".into()
            }
        );
        assert!(matches!(
            parse_presentation("gen m arity 2 trivial\nrel m(m(m(x1,x2),x3),x4)"),
            Err(OpkError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_presentation("gen m arity 2 trivial\nrel m(x1,x2,x3)"),
            Err(OpkError::Parse { .. })
        ));
        assert!(matches!(
            parse_presentation("gen m arity 2 trivial\nrel m(m(x1,x2),x3) + m(m(x1,x2),m(x3,x4))"),
            Err(OpkError::Parse { .. })
        ));
        assert!(matches!(parse_presentation("gen m arity 2 trivial\nrel m(x1,m(x2,x3)) $"), Err(OpkError::Parse { column: 20, .. })));
    }
}
