//! The `cocycle-config v1` textual format: lexer, parser, AST and the
//! canonical serializer used for round-trip checks.
//!
//! Statements:
//!
//! ```text
//! cocycle-config v1
//! group K4 = perm { degree = 4; generators = ["(0 1)(2 3)", "(0 2)(1 3)"] }
//! group C2 = table { order = 2; table = [0, 1, 1, 0]; names = ["e", "t"] }
//! group S = builtin S3
//! complex square { facets = [(0,1,2), (0,2,3)] }
//! complex T = builtin torus7
//! extension E = Z2 -> Z4
//! extension F = center(Q8) -> Q8
//! extension W = Z2 -> Z2xZ2 { i = { "r" -> "b" }; alpha = conjugation }
//! cochain q on rp2_6 over Z2 { edge (0,1) = "r"; edge (0,2) = "r" }
//! cochain2 z on rp2_6 over Z2 { tri (1,3,5) = "r" }
//! budgets { nodes = 10000000; group_cap = 512; aut_cap = 64 }
//! task h1 torus7 Z2 expect count = 4
//! task delta rp2_6 E generator expect trivial = false
//! ```
//!
//! Comments run from `#` to end of line. Semicolons are optional
//! separators. Diagnostics carry a stable code and a line:column position.

use std::fmt;

/// A parse- or validation-time diagnostic with a stable code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: &'static str,
    pub message: String,
    pub line: usize,
    pub col: usize,
}

impl Diagnostic {
    pub fn new(code: &'static str, message: impl Into<String>, pos: (usize, usize)) -> Self {
        Diagnostic {
            code,
            message: message.into(),
            line: pos.0,
            col: pos.1,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at {}:{}: {}",
            self.code, self.line, self.col, self.message
        )
    }
}

impl std::error::Error for Diagnostic {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(u64),
    Str(String),
    Arrow,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn lex(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let pos = (line, col);
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' | ';' => {
                chars.next();
                col += 1;
            }
            '#' => {
                for c in chars.by_ref() {
                    if c == '\n' {
                        break;
                    }
                }
                line += 1;
                col = 1;
            }
            '"' => {
                chars.next();
                col += 1;
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => {
                            col += 1;
                            break;
                        }
                        Some('\n') | None => {
                            return Err(Diagnostic::new("E-PARSE", "unterminated string", pos))
                        }
                        Some(c) => {
                            s.push(c);
                            col += 1;
                        }
                    }
                }
                out.push(Token {
                    tok: Tok::Str(s),
                    line: pos.0,
                    col: pos.1,
                });
            }
            '{' | '}' | '[' | ']' | '(' | ')' | ',' | '=' => {
                chars.next();
                col += 1;
                let tok = match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    _ => Tok::Eq,
                };
                out.push(Token {
                    tok,
                    line: pos.0,
                    col: pos.1,
                });
            }
            '-' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'>') {
                    chars.next();
                    col += 1;
                    out.push(Token {
                        tok: Tok::Arrow,
                        line: pos.0,
                        col: pos.1,
                    });
                } else {
                    return Err(Diagnostic::new("E-PARSE", "stray '-'", pos));
                }
            }
            c if c.is_ascii_digit() => {
                let mut n = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        n.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let value: u64 = n
                    .parse()
                    .map_err(|_| Diagnostic::new("E-PARSE", format!("bad integer {n}"), pos))?;
                out.push(Token {
                    tok: Tok::Int(value),
                    line: pos.0,
                    col: pos.1,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                loop {
                    match chars.peek() {
                        Some(&d) if d.is_ascii_alphanumeric() || d == '_' => {
                            s.push(d);
                            chars.next();
                            col += 1;
                        }
                        Some(&'-') => {
                            // A hyphen belongs to the identifier unless it
                            // starts an arrow.
                            let mut ahead = chars.clone();
                            ahead.next();
                            if ahead.peek() == Some(&'>') {
                                break;
                            }
                            s.push('-');
                            chars.next();
                            col += 1;
                        }
                        _ => break,
                    }
                }
                out.push(Token {
                    tok: Tok::Ident(s),
                    line: pos.0,
                    col: pos.1,
                });
            }
            other => {
                return Err(Diagnostic::new(
                    "E-PARSE",
                    format!("unexpected character {other:?}"),
                    pos,
                ))
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------
// AST

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupDef {
    Builtin(String),
    Perm {
        degree: usize,
        generators: Vec<String>,
    },
    Table {
        order: usize,
        table: Vec<u64>,
        names: Option<Vec<String>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComplexDef {
    Builtin(String),
    Facets(Vec<Vec<usize>>),
}

/// Reference to the subgroup side of an extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupRef {
    Name(String),
    Center(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlphaDef {
    Conjugation,
    Trivial,
    /// Per actor element (by name): image pairs on the target group.
    Explicit(Vec<(String, Vec<(String, String)>)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionDef {
    pub g: GroupRef,
    pub n: String,
    /// Generator images `g-element -> n-element`, inferred when absent.
    pub i: Option<Vec<(String, String)>>,
    pub alpha: AlphaDef,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CochainDef {
    pub complex: String,
    pub group: String,
    pub edges: Vec<((usize, usize), String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain2Def {
    pub complex: String,
    pub group: String,
    pub triangles: Vec<((usize, usize, usize), String)>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BudgetDef {
    pub nodes: Option<u64>,
    pub group_cap: Option<u64>,
    pub aut_cap: Option<u64>,
}

/// How a task names its complex: explicitly, or deferring to the
/// `--seed-complex` default.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComplexRef {
    Named(String),
    Default,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtRef {
    Named(String),
    Inline { g: GroupRef, n: String },
}

/// Selector for a 1-cochain argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sel1 {
    Trivial,
    /// The unique nontrivial class (requires exactly two classes).
    Generator,
    /// The k-th class in canonical order.
    Class(usize),
    Named(String),
}

/// Selector for a 2-cochain argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sel2 {
    Trivial,
    /// The first 2-cocycle with a nontrivial class, in lexicographic order.
    Generator,
    Named(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffSpec {
    Int,
    Mod(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GranularitySpec {
    Class,
    Cocycle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TaskSpec {
    H1 {
        complex: ComplexRef,
        group: String,
    },
    Abelian {
        complex: ComplexRef,
        coeff: CoeffSpec,
        degree: usize,
    },
    H2nab {
        complex: ComplexRef,
        ext: ExtRef,
    },
    Nu {
        complex: ComplexRef,
        ext: ExtRef,
        sel: Sel1,
    },
    Delta {
        complex: ComplexRef,
        ext: ExtRef,
        sel: Sel1,
    },
    Lift {
        complex: ComplexRef,
        ext: ExtRef,
        sel: Sel1,
        granularity: Option<GranularitySpec>,
    },
    Exactness {
        complex: ComplexRef,
        ext: ExtRef,
    },
    Square {
        complex: ComplexRef,
        ext: ExtRef,
        all_cocycles: bool,
    },
    Gerbe {
        complex: ComplexRef,
        ext: ExtRef,
        sel: Sel1,
    },
    GaugeClasses {
        complex: ComplexRef,
        ext: ExtRef,
        sel: Sel1,
    },
    Realize {
        complex: ComplexRef,
        ext: ExtRef,
        sel: Sel2,
    },
}

impl TaskSpec {
    pub fn name(&self) -> &'static str {
        match self {
            TaskSpec::H1 { .. } => "h1",
            TaskSpec::Abelian { .. } => "abelian",
            TaskSpec::H2nab { .. } => "h2nab",
            TaskSpec::Nu { .. } => "nu",
            TaskSpec::Delta { .. } => "delta",
            TaskSpec::Lift { .. } => "lift",
            TaskSpec::Exactness { .. } => "exactness",
            TaskSpec::Square { .. } => "square",
            TaskSpec::Gerbe { .. } => "gerbe",
            TaskSpec::GaugeClasses { .. } => "gauge-classes",
            TaskSpec::Realize { .. } => "realize",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExpectValue {
    Int(u64),
    Bool(bool),
    Str(String),
}

#[derive(Debug, Clone)]
pub struct TaskDef {
    pub spec: TaskSpec,
    pub expects: Vec<(String, ExpectValue)>,
    pub line: usize,
}

impl PartialEq for TaskDef {
    fn eq(&self, other: &Self) -> bool {
        // The source line is positional metadata, not configuration.
        self.spec == other.spec && self.expects == other.expects
    }
}

/// Parsed configuration, order-preserving.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigAst {
    pub groups: Vec<(String, GroupDef)>,
    pub complexes: Vec<(String, ComplexDef)>,
    pub extensions: Vec<(String, ExtensionDef)>,
    pub cochains: Vec<(String, CochainDef)>,
    pub cochains2: Vec<(String, Cochain2Def)>,
    pub budgets: BudgetDef,
    pub tasks: Vec<TaskDef>,
}

// ---------------------------------------------------------------------
// Parser

pub struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    pub fn new(tokens: Vec<Token>) -> Self {
        Parser { tokens, pos: 0 }
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos.min(self.tokens.len().saturating_sub(1)))
            .map(|t| (t.line, t.col))
            .unwrap_or((0, 0))
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, code: &'static str, message: impl Into<String>) -> Diagnostic {
        Diagnostic::new(code, message, self.here())
    }

    fn expect_tok(&mut self, want: &Tok, what: &str) -> Result<(), Diagnostic> {
        match self.next() {
            Some(t) if t.tok == *want => Ok(()),
            Some(t) => Err(Diagnostic::new(
                "E-PARSE",
                format!("expected {what}, found {:?}", t.tok),
                (t.line, t.col),
            )),
            None => Err(self.err("E-PARSE", format!("expected {what}, found end of input"))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, (usize, usize)), Diagnostic> {
        match self.next() {
            Some(Token {
                tok: Tok::Ident(s),
                line,
                col,
            }) => Ok((s, (line, col))),
            Some(t) => Err(Diagnostic::new(
                "E-PARSE",
                format!("expected {what}, found {:?}", t.tok),
                (t.line, t.col),
            )),
            None => Err(self.err("E-PARSE", format!("expected {what}, found end of input"))),
        }
    }

    fn int(&mut self, what: &str) -> Result<u64, Diagnostic> {
        match self.next() {
            Some(Token {
                tok: Tok::Int(n), ..
            }) => Ok(n),
            Some(t) => Err(Diagnostic::new(
                "E-PARSE",
                format!("expected {what}, found {:?}", t.tok),
                (t.line, t.col),
            )),
            None => Err(self.err("E-PARSE", format!("expected {what}, found end of input"))),
        }
    }

    fn string(&mut self, what: &str) -> Result<String, Diagnostic> {
        match self.next() {
            Some(Token {
                tok: Tok::Str(s), ..
            }) => Ok(s),
            Some(t) => Err(Diagnostic::new(
                "E-PARSE",
                format!("expected {what}, found {:?}", t.tok),
                (t.line, t.col),
            )),
            None => Err(self.err("E-PARSE", format!("expected {what}, found end of input"))),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_ident(&mut self, word: &str) -> bool {
        if let Some(Tok::Ident(s)) = self.peek() {
            if s == word {
                self.pos += 1;
                return true;
            }
        }
        false
    }
}

pub fn parse_config_text(text: &str) -> Result<ConfigAst, Diagnostic> {
    let tokens = lex(text)?;
    let mut p = Parser::new(tokens);
    // Version header.
    match (p.next(), p.next()) {
        (
            Some(Token {
                tok: Tok::Ident(a), ..
            }),
            Some(Token {
                tok: Tok::Ident(b), ..
            }),
        ) if a == "cocycle-config" && b == "v1" => {}
        _ => {
            return Err(Diagnostic::new(
                "E-VERSION",
                "config must start with the header `cocycle-config v1`",
                (1, 1),
            ))
        }
    }
    let mut ast = ConfigAst::default();
    while let Some(tok) = p.peek() {
        let Tok::Ident(word) = tok.clone() else {
            return Err(p.err("E-PARSE", "expected a statement keyword"));
        };
        p.pos += 1;
        match word.as_str() {
            "group" => {
                let (name, _) = p.ident("group name")?;
                p.expect_tok(&Tok::Eq, "'='")?;
                ast.groups.push((name, parse_group_def(&mut p)?));
            }
            "complex" => {
                let (name, _) = p.ident("complex name")?;
                if p.eat(&Tok::Eq) {
                    if !p.eat_ident("builtin") {
                        return Err(p.err("E-PARSE", "expected `builtin <name>`"));
                    }
                    let (builtin, _) = p.ident("builtin complex name")?;
                    ast.complexes.push((name, ComplexDef::Builtin(builtin)));
                } else {
                    p.expect_tok(&Tok::LBrace, "'{'")?;
                    if !p.eat_ident("facets") {
                        return Err(p.err("E-PARSE", "expected `facets = [...]`"));
                    }
                    p.expect_tok(&Tok::Eq, "'='")?;
                    let facets = parse_tuple_list(&mut p)?;
                    p.expect_tok(&Tok::RBrace, "'}'")?;
                    ast.complexes.push((name, ComplexDef::Facets(facets)));
                }
            }
            "extension" => {
                let (name, _) = p.ident("extension name")?;
                p.expect_tok(&Tok::Eq, "'='")?;
                ast.extensions.push((name, parse_extension_def(&mut p)?));
            }
            "cochain" => {
                let (name, _) = p.ident("cochain name")?;
                if !p.eat_ident("on") {
                    return Err(p.err("E-PARSE", "expected `on <complex>`"));
                }
                let (complex, _) = p.ident("complex name")?;
                if !p.eat_ident("over") {
                    return Err(p.err("E-PARSE", "expected `over <group>`"));
                }
                let (group, _) = p.ident("group name")?;
                p.expect_tok(&Tok::LBrace, "'{'")?;
                let mut edges = Vec::new();
                while !p.eat(&Tok::RBrace) {
                    if !p.eat_ident("edge") {
                        return Err(p.err("E-PARSE", "expected `edge (i,j) = \"name\"`"));
                    }
                    let t = parse_tuple(&mut p)?;
                    if t.len() != 2 {
                        return Err(p.err("E-PARSE", "edges have two vertices"));
                    }
                    p.expect_tok(&Tok::Eq, "'='")?;
                    let value = p.string("element name")?;
                    edges.push(((t[0], t[1]), value));
                }
                ast.cochains.push((
                    name,
                    CochainDef {
                        complex,
                        group,
                        edges,
                    },
                ));
            }
            "cochain2" => {
                let (name, _) = p.ident("cochain name")?;
                if !p.eat_ident("on") {
                    return Err(p.err("E-PARSE", "expected `on <complex>`"));
                }
                let (complex, _) = p.ident("complex name")?;
                if !p.eat_ident("over") {
                    return Err(p.err("E-PARSE", "expected `over <group>`"));
                }
                let (group, _) = p.ident("group name")?;
                p.expect_tok(&Tok::LBrace, "'{'")?;
                let mut triangles = Vec::new();
                while !p.eat(&Tok::RBrace) {
                    if !p.eat_ident("tri") {
                        return Err(p.err("E-PARSE", "expected `tri (i,j,k) = \"name\"`"));
                    }
                    let t = parse_tuple(&mut p)?;
                    if t.len() != 3 {
                        return Err(p.err("E-PARSE", "triangles have three vertices"));
                    }
                    p.expect_tok(&Tok::Eq, "'='")?;
                    let value = p.string("element name")?;
                    triangles.push(((t[0], t[1], t[2]), value));
                }
                ast.cochains2.push((
                    name,
                    Cochain2Def {
                        complex,
                        group,
                        triangles,
                    },
                ));
            }
            "budgets" => {
                p.expect_tok(&Tok::LBrace, "'{'")?;
                while !p.eat(&Tok::RBrace) {
                    let (key, pos) = p.ident("budget key")?;
                    p.expect_tok(&Tok::Eq, "'='")?;
                    let value = p.int("budget value")?;
                    match key.as_str() {
                        "nodes" => ast.budgets.nodes = Some(value),
                        "group_cap" => ast.budgets.group_cap = Some(value),
                        "aut_cap" => ast.budgets.aut_cap = Some(value),
                        other => {
                            return Err(Diagnostic::new(
                                "E-PARSE",
                                format!("unknown budget key {other:?}"),
                                pos,
                            ))
                        }
                    }
                }
            }
            "task" => {
                let line = p.here().0;
                let spec = parse_task(&mut p)?;
                let mut expects = Vec::new();
                while p.eat_ident("expect") {
                    let (field, _) = p.ident("expect field")?;
                    p.expect_tok(&Tok::Eq, "'='")?;
                    let value = match p.next() {
                        Some(Token {
                            tok: Tok::Int(n), ..
                        }) => ExpectValue::Int(n),
                        Some(Token {
                            tok: Tok::Ident(s), ..
                        }) if s == "true" => ExpectValue::Bool(true),
                        Some(Token {
                            tok: Tok::Ident(s), ..
                        }) if s == "false" => ExpectValue::Bool(false),
                        Some(Token {
                            tok: Tok::Str(s), ..
                        }) => ExpectValue::Str(s),
                        _ => return Err(p.err("E-PARSE", "expected an int, bool or string")),
                    };
                    expects.push((field, value));
                }
                ast.tasks.push(TaskDef {
                    spec,
                    expects,
                    line,
                });
            }
            other => {
                return Err(p.err("E-PARSE", format!("unknown statement keyword {other:?}")));
            }
        }
    }
    Ok(ast)
}

fn parse_group_def(p: &mut Parser) -> Result<GroupDef, Diagnostic> {
    let (kind, pos) = p.ident("group definition kind")?;
    match kind.as_str() {
        "builtin" => {
            let (name, _) = p.ident("builtin group name")?;
            Ok(GroupDef::Builtin(name))
        }
        "perm" => {
            p.expect_tok(&Tok::LBrace, "'{'")?;
            let mut degree = None;
            let mut generators = None;
            while !p.eat(&Tok::RBrace) {
                let (key, kpos) = p.ident("perm key")?;
                p.expect_tok(&Tok::Eq, "'='")?;
                match key.as_str() {
                    "degree" => degree = Some(p.int("degree")? as usize),
                    "generators" => {
                        p.expect_tok(&Tok::LBracket, "'['")?;
                        let mut gens = Vec::new();
                        while !p.eat(&Tok::RBracket) {
                            gens.push(p.string("cycle notation")?);
                            p.eat(&Tok::Comma);
                        }
                        generators = Some(gens);
                    }
                    other => {
                        return Err(Diagnostic::new(
                            "E-PARSE",
                            format!("unknown perm key {other:?}"),
                            kpos,
                        ))
                    }
                }
            }
            match (degree, generators) {
                (Some(degree), Some(generators)) => Ok(GroupDef::Perm { degree, generators }),
                _ => Err(Diagnostic::new(
                    "E-PARSE",
                    "perm group needs both degree and generators",
                    pos,
                )),
            }
        }
        "table" => {
            p.expect_tok(&Tok::LBrace, "'{'")?;
            let mut order = None;
            let mut table = None;
            let mut names = None;
            while !p.eat(&Tok::RBrace) {
                let (key, kpos) = p.ident("table key")?;
                p.expect_tok(&Tok::Eq, "'='")?;
                match key.as_str() {
                    "order" => order = Some(p.int("order")? as usize),
                    "table" => {
                        p.expect_tok(&Tok::LBracket, "'['")?;
                        let mut entries = Vec::new();
                        while !p.eat(&Tok::RBracket) {
                            entries.push(p.int("table entry")?);
                            p.eat(&Tok::Comma);
                        }
                        table = Some(entries);
                    }
                    "names" => {
                        p.expect_tok(&Tok::LBracket, "'['")?;
                        let mut ns = Vec::new();
                        while !p.eat(&Tok::RBracket) {
                            ns.push(p.string("element name")?);
                            p.eat(&Tok::Comma);
                        }
                        names = Some(ns);
                    }
                    other => {
                        return Err(Diagnostic::new(
                            "E-PARSE",
                            format!("unknown table key {other:?}"),
                            kpos,
                        ))
                    }
                }
            }
            match (order, table) {
                (Some(order), Some(table)) => Ok(GroupDef::Table {
                    order,
                    table,
                    names,
                }),
                _ => Err(Diagnostic::new(
                    "E-PARSE",
                    "table group needs both order and table",
                    pos,
                )),
            }
        }
        other => Err(Diagnostic::new(
            "E-PARSE",
            format!("unknown group definition kind {other:?} (builtin, perm or table)"),
            pos,
        )),
    }
}

fn parse_group_ref(p: &mut Parser) -> Result<GroupRef, Diagnostic> {
    let (name, _) = p.ident("group name")?;
    if name == "center" && p.eat(&Tok::LParen) {
        let (inner, _) = p.ident("group name")?;
        p.expect_tok(&Tok::RParen, "')'")?;
        Ok(GroupRef::Center(inner))
    } else {
        Ok(GroupRef::Name(name))
    }
}

fn parse_extension_def(p: &mut Parser) -> Result<ExtensionDef, Diagnostic> {
    let g = parse_group_ref(p)?;
    p.expect_tok(&Tok::Arrow, "'->'")?;
    let (n, _) = p.ident("group name")?;
    let mut def = ExtensionDef {
        g,
        n,
        i: None,
        alpha: AlphaDef::Conjugation,
    };
    if p.eat(&Tok::LBrace) {
        while !p.eat(&Tok::RBrace) {
            let (key, kpos) = p.ident("extension key")?;
            p.expect_tok(&Tok::Eq, "'='")?;
            match key.as_str() {
                "i" => {
                    p.expect_tok(&Tok::LBrace, "'{'")?;
                    let mut pairs = Vec::new();
                    while !p.eat(&Tok::RBrace) {
                        let from = p.string("G element name")?;
                        p.expect_tok(&Tok::Arrow, "'->'")?;
                        let to = p.string("N element name")?;
                        pairs.push((from, to));
                        p.eat(&Tok::Comma);
                    }
                    def.i = Some(pairs);
                }
                "alpha" => {
                    let (kind, apos) = p.ident("alpha kind")?;
                    def.alpha = match kind.as_str() {
                        "conjugation" => AlphaDef::Conjugation,
                        "trivial" => AlphaDef::Trivial,
                        "explicit" => {
                            p.expect_tok(&Tok::LBrace, "'{'")?;
                            let mut entries = Vec::new();
                            while !p.eat(&Tok::RBrace) {
                                let actor = p.string("N element name")?;
                                p.expect_tok(&Tok::Arrow, "'->'")?;
                                p.expect_tok(&Tok::LParen, "'('")?;
                                let mut pairs = Vec::new();
                                while !p.eat(&Tok::RParen) {
                                    let from = p.string("G element name")?;
                                    p.expect_tok(&Tok::Arrow, "'->'")?;
                                    let to = p.string("G element name")?;
                                    pairs.push((from, to));
                                    p.eat(&Tok::Comma);
                                }
                                entries.push((actor, pairs));
                                p.eat(&Tok::Comma);
                            }
                            AlphaDef::Explicit(entries)
                        }
                        other => {
                            return Err(Diagnostic::new(
                                "E-PARSE",
                                format!("unknown alpha kind {other:?}"),
                                apos,
                            ))
                        }
                    };
                }
                other => {
                    return Err(Diagnostic::new(
                        "E-PARSE",
                        format!("unknown extension key {other:?}"),
                        kpos,
                    ))
                }
            }
        }
    }
    Ok(def)
}

fn parse_tuple(p: &mut Parser) -> Result<Vec<usize>, Diagnostic> {
    p.expect_tok(&Tok::LParen, "'('")?;
    let mut out = Vec::new();
    while !p.eat(&Tok::RParen) {
        out.push(p.int("vertex index")? as usize);
        p.eat(&Tok::Comma);
    }
    Ok(out)
}

fn parse_tuple_list(p: &mut Parser) -> Result<Vec<Vec<usize>>, Diagnostic> {
    p.expect_tok(&Tok::LBracket, "'['")?;
    let mut out = Vec::new();
    while !p.eat(&Tok::RBracket) {
        out.push(parse_tuple(p)?);
        p.eat(&Tok::Comma);
    }
    Ok(out)
}

/// One pre-scanned task argument.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Arg {
    Name(String),
    Num(u64),
    Inline { g: GroupRef, n: String },
}

fn is_statement_keyword(s: &str) -> bool {
    matches!(
        s,
        "group" | "complex" | "extension" | "cochain" | "cochain2" | "budgets" | "task" | "expect"
    )
}

/// Collect the arguments of one task: names (with optional `center(...)`
/// and `->` forming inline extensions) and integers, stopping at the next
/// statement keyword or end of input.
fn collect_task_args(p: &mut Parser) -> Result<Vec<Arg>, Diagnostic> {
    let mut args = Vec::new();
    loop {
        match p.peek() {
            Some(Tok::Int(n)) => {
                let n = *n;
                p.pos += 1;
                args.push(Arg::Num(n));
            }
            Some(Tok::Ident(s)) if !is_statement_keyword(s) => {
                let g = parse_group_ref(p)?;
                if p.eat(&Tok::Arrow) {
                    let (n, _) = p.ident("group name")?;
                    args.push(Arg::Inline { g, n });
                } else {
                    match g {
                        GroupRef::Name(name) => args.push(Arg::Name(name)),
                        GroupRef::Center(_) => {
                            return Err(p.err("E-TASK", "center(...) must be followed by '->'"))
                        }
                    }
                }
            }
            _ => break,
        }
    }
    Ok(args)
}

struct TaskArgs {
    args: Vec<Arg>,
    pos: usize,
    line: usize,
    col: usize,
    task: &'static str,
}

impl TaskArgs {
    fn err(&self, message: impl Into<String>) -> Diagnostic {
        Diagnostic::new("E-TASK", message, (self.line, self.col))
    }

    fn remaining(&self) -> usize {
        self.args.len() - self.pos
    }

    fn next(&mut self) -> Option<Arg> {
        let a = self.args.get(self.pos).cloned();
        if a.is_some() {
            self.pos += 1;
        }
        a
    }

    fn name(&mut self, what: &str) -> Result<String, Diagnostic> {
        match self.next() {
            Some(Arg::Name(s)) => Ok(s),
            other => Err(self.err(format!("{}: expected {what}, found {other:?}", self.task))),
        }
    }

    fn num(&mut self, what: &str) -> Result<u64, Diagnostic> {
        match self.next() {
            Some(Arg::Num(n)) => Ok(n),
            other => Err(self.err(format!("{}: expected {what}, found {other:?}", self.task))),
        }
    }

    fn ext(&mut self) -> Result<ExtRef, Diagnostic> {
        match self.next() {
            Some(Arg::Name(s)) => Ok(ExtRef::Named(s)),
            Some(Arg::Inline { g, n }) => Ok(ExtRef::Inline { g, n }),
            other => Err(self.err(format!(
                "{}: expected an extension, found {other:?}",
                self.task
            ))),
        }
    }

    fn sel1(&mut self) -> Result<Sel1, Diagnostic> {
        match self.next() {
            Some(Arg::Name(s)) => Ok(match s.as_str() {
                "trivial" => Sel1::Trivial,
                "generator" => Sel1::Generator,
                "class" => Sel1::Class(self.num("class index")? as usize),
                _ => Sel1::Named(s),
            }),
            other => Err(self.err(format!(
                "{}: expected a cochain selector, found {other:?}",
                self.task
            ))),
        }
    }

    fn sel2(&mut self) -> Result<Sel2, Diagnostic> {
        match self.next() {
            Some(Arg::Name(s)) => Ok(match s.as_str() {
                "trivial" => Sel2::Trivial,
                "generator" => Sel2::Generator,
                _ => Sel2::Named(s),
            }),
            other => Err(self.err(format!(
                "{}: expected a 2-cochain selector, found {other:?}",
                self.task
            ))),
        }
    }

    fn finish(&self) -> Result<(), Diagnostic> {
        if self.pos == self.args.len() {
            Ok(())
        } else {
            Err(self.err(format!(
                "{}: unexpected trailing arguments {:?}",
                self.task,
                &self.args[self.pos..]
            )))
        }
    }
}

/// Parse one task (subcommand plus arguments). Used for config `task`
/// statements and verbatim for command-line task arguments. The complex
/// argument always comes first and may be omitted, in which case the
/// `--seed-complex` default applies.
pub fn parse_task(p: &mut Parser) -> Result<TaskSpec, Diagnostic> {
    let (name, pos) = p.ident("task name")?;
    let task: &'static str = match name.as_str() {
        "h1" => "h1",
        "abelian" => "abelian",
        "h2nab" => "h2nab",
        "nu" => "nu",
        "delta" => "delta",
        "lift" => "lift",
        "exactness" => "exactness",
        "square" => "square",
        "gerbe" => "gerbe",
        "gauge-classes" => "gauge-classes",
        "realize" => "realize",
        other => {
            return Err(Diagnostic::new(
                "E-TASK",
                format!("unknown task {other:?}"),
                pos,
            ))
        }
    };
    let args = collect_task_args(p)?;
    let mut a = TaskArgs {
        args,
        pos: 0,
        line: pos.0,
        col: pos.1,
        task,
    };
    // Full arity per task; one argument short means the complex was
    // omitted. Tasks with optional trailing modifiers count both forms.
    let take_complex = |a: &mut TaskArgs, full: usize| -> Result<ComplexRef, Diagnostic> {
        if a.remaining() >= full {
            Ok(ComplexRef::Named(a.name("a complex")?))
        } else {
            Ok(ComplexRef::Default)
        }
    };
    let spec = match task {
        "h1" => {
            let complex = take_complex(&mut a, 2)?;
            let group = a.name("a group")?;
            TaskSpec::H1 { complex, group }
        }
        "abelian" => {
            let complex = take_complex(&mut a, 3)?;
            let coeff_name = a.name("Z or Z_<m>")?;
            let coeff = parse_coeff(&coeff_name, pos)?;
            let degree = a.num("a degree")? as usize;
            if degree > 3 {
                return Err(a.err("degree must be at most 3"));
            }
            TaskSpec::Abelian {
                complex,
                coeff,
                degree,
            }
        }
        "h2nab" => {
            let complex = take_complex(&mut a, 2)?;
            let ext = a.ext()?;
            TaskSpec::H2nab { complex, ext }
        }
        "nu" => {
            let complex = take_complex(&mut a, 3)?;
            let ext = a.ext()?;
            let sel = a.sel1()?;
            TaskSpec::Nu { complex, ext, sel }
        }
        "delta" => {
            let complex = take_complex(&mut a, 3)?;
            let ext = a.ext()?;
            let sel = a.sel1()?;
            TaskSpec::Delta { complex, ext, sel }
        }
        "lift" => {
            // Optional trailing granularity keyword.
            let has_granularity = matches!(
                a.args.last(),
                Some(Arg::Name(s)) if s == "class" || s == "cocycle"
            );
            let full = if has_granularity { 4 } else { 3 };
            let complex = take_complex(&mut a, full)?;
            let ext = a.ext()?;
            let sel = a.sel1()?;
            let granularity = if has_granularity {
                match a.name("granularity")?.as_str() {
                    "class" => Some(GranularitySpec::Class),
                    _ => Some(GranularitySpec::Cocycle),
                }
            } else {
                None
            };
            TaskSpec::Lift {
                complex,
                ext,
                sel,
                granularity,
            }
        }
        "exactness" => {
            let complex = take_complex(&mut a, 2)?;
            let ext = a.ext()?;
            TaskSpec::Exactness { complex, ext }
        }
        "square" => {
            let all = matches!(a.args.last(), Some(Arg::Name(s)) if s == "all");
            let full = if all { 3 } else { 2 };
            let complex = take_complex(&mut a, full)?;
            let ext = a.ext()?;
            if all {
                a.name("all")?;
            }
            TaskSpec::Square {
                complex,
                ext,
                all_cocycles: all,
            }
        }
        "gerbe" => {
            let complex = take_complex(&mut a, 3)?;
            let ext = a.ext()?;
            let sel = a.sel1()?;
            TaskSpec::Gerbe { complex, ext, sel }
        }
        "gauge-classes" => {
            let complex = take_complex(&mut a, 3)?;
            let ext = a.ext()?;
            let sel = a.sel1()?;
            TaskSpec::GaugeClasses { complex, ext, sel }
        }
        "realize" => {
            let complex = take_complex(&mut a, 3)?;
            let ext = a.ext()?;
            let sel = a.sel2()?;
            TaskSpec::Realize { complex, ext, sel }
        }
        _ => unreachable!("task names matched above"),
    };
    a.finish()?;
    Ok(spec)
}

fn parse_coeff(name: &str, pos: (usize, usize)) -> Result<CoeffSpec, Diagnostic> {
    if name == "Z" {
        return Ok(CoeffSpec::Int);
    }
    if let Some(m) = name.strip_prefix("Z_") {
        if let Ok(m) = m.parse::<u64>() {
            if m >= 2 {
                return Ok(CoeffSpec::Mod(m));
            }
        }
    }
    Err(Diagnostic::new(
        "E-TASK",
        format!("bad coefficient {name:?}: use Z or Z_<m> with m >= 2"),
        pos,
    ))
}

// ---------------------------------------------------------------------
// Canonical serialization (round-trip support)

pub fn serialize_config(ast: &ConfigAst) -> String {
    let mut out = String::from("cocycle-config v1\n\n");
    for (name, def) in &ast.groups {
        match def {
            GroupDef::Builtin(b) => out.push_str(&format!("group {name} = builtin {b}\n")),
            GroupDef::Perm { degree, generators } => {
                let gens: Vec<String> = generators.iter().map(|g| format!("{g:?}")).collect();
                out.push_str(&format!(
                    "group {name} = perm {{ degree = {degree}; generators = [{}] }}\n",
                    gens.join(", ")
                ));
            }
            GroupDef::Table {
                order,
                table,
                names,
            } => {
                let entries: Vec<String> = table.iter().map(|x| x.to_string()).collect();
                out.push_str(&format!(
                    "group {name} = table {{ order = {order}; table = [{}]",
                    entries.join(", ")
                ));
                if let Some(ns) = names {
                    let ns: Vec<String> = ns.iter().map(|x| format!("{x:?}")).collect();
                    out.push_str(&format!("; names = [{}]", ns.join(", ")));
                }
                out.push_str(" }\n");
            }
        }
    }
    for (name, def) in &ast.complexes {
        match def {
            ComplexDef::Builtin(b) => out.push_str(&format!("complex {name} = builtin {b}\n")),
            ComplexDef::Facets(facets) => {
                let fs: Vec<String> = facets
                    .iter()
                    .map(|f| {
                        let vs: Vec<String> = f.iter().map(|v| v.to_string()).collect();
                        format!("({})", vs.join(","))
                    })
                    .collect();
                out.push_str(&format!(
                    "complex {name} {{ facets = [{}] }}\n",
                    fs.join(", ")
                ));
            }
        }
    }
    for (name, def) in &ast.extensions {
        let g = match &def.g {
            GroupRef::Name(n) => n.clone(),
            GroupRef::Center(n) => format!("center({n})"),
        };
        out.push_str(&format!("extension {name} = {g} -> {}", def.n));
        let needs_block = def.i.is_some() || def.alpha != AlphaDef::Conjugation;
        if needs_block {
            out.push_str(" {");
            if let Some(pairs) = &def.i {
                let ps: Vec<String> = pairs
                    .iter()
                    .map(|(a, b)| format!("{a:?} -> {b:?}"))
                    .collect();
                out.push_str(&format!(" i = {{ {} }}", ps.join(", ")));
            }
            match &def.alpha {
                AlphaDef::Conjugation => {}
                AlphaDef::Trivial => out.push_str(" alpha = trivial"),
                AlphaDef::Explicit(entries) => {
                    let es: Vec<String> = entries
                        .iter()
                        .map(|(actor, pairs)| {
                            let ps: Vec<String> = pairs
                                .iter()
                                .map(|(a, b)| format!("{a:?} -> {b:?}"))
                                .collect();
                            format!("{actor:?} -> ({})", ps.join(", "))
                        })
                        .collect();
                    out.push_str(&format!(" alpha = explicit {{ {} }}", es.join(", ")));
                }
            }
            out.push_str(" }");
        }
        out.push('\n');
    }
    for (name, def) in &ast.cochains {
        out.push_str(&format!(
            "cochain {name} on {} over {} {{",
            def.complex, def.group
        ));
        for ((i, j), value) in &def.edges {
            out.push_str(&format!(" edge ({i},{j}) = {value:?};"));
        }
        out.push_str(" }\n");
    }
    for (name, def) in &ast.cochains2 {
        out.push_str(&format!(
            "cochain2 {name} on {} over {} {{",
            def.complex, def.group
        ));
        for ((i, j, k), value) in &def.triangles {
            out.push_str(&format!(" tri ({i},{j},{k}) = {value:?};"));
        }
        out.push_str(" }\n");
    }
    if ast.budgets != BudgetDef::default() {
        out.push_str("budgets {");
        if let Some(n) = ast.budgets.nodes {
            out.push_str(&format!(" nodes = {n};"));
        }
        if let Some(n) = ast.budgets.group_cap {
            out.push_str(&format!(" group_cap = {n};"));
        }
        if let Some(n) = ast.budgets.aut_cap {
            out.push_str(&format!(" aut_cap = {n};"));
        }
        out.push_str(" }\n");
    }
    for task in &ast.tasks {
        out.push_str(&format!("task {}", serialize_task(&task.spec)));
        for (field, value) in &task.expects {
            let v = match value {
                ExpectValue::Int(n) => n.to_string(),
                ExpectValue::Bool(b) => b.to_string(),
                ExpectValue::Str(s) => format!("{s:?}"),
            };
            out.push_str(&format!(" expect {field} = {v}"));
        }
        out.push('\n');
    }
    out
}

fn serialize_complex_ref(c: &ComplexRef) -> String {
    match c {
        ComplexRef::Named(n) => format!("{n} "),
        ComplexRef::Default => String::new(),
    }
}

fn serialize_ext_ref(e: &ExtRef) -> String {
    match e {
        ExtRef::Named(n) => n.clone(),
        ExtRef::Inline { g, n } => {
            let g = match g {
                GroupRef::Name(x) => x.clone(),
                GroupRef::Center(x) => format!("center({x})"),
            };
            format!("{g}->{n}")
        }
    }
}

fn serialize_sel1(s: &Sel1) -> String {
    match s {
        Sel1::Trivial => "trivial".into(),
        Sel1::Generator => "generator".into(),
        Sel1::Class(k) => format!("class {k}"),
        Sel1::Named(n) => n.clone(),
    }
}

fn serialize_task(spec: &TaskSpec) -> String {
    match spec {
        TaskSpec::H1 { complex, group } => {
            format!("h1 {}{group}", serialize_complex_ref(complex))
        }
        TaskSpec::Abelian {
            complex,
            coeff,
            degree,
        } => {
            let c = match coeff {
                CoeffSpec::Int => "Z".to_string(),
                CoeffSpec::Mod(m) => format!("Z_{m}"),
            };
            format!("abelian {}{c} {degree}", serialize_complex_ref(complex))
        }
        TaskSpec::H2nab { complex, ext } => format!(
            "h2nab {}{}",
            serialize_complex_ref(complex),
            serialize_ext_ref(ext)
        ),
        TaskSpec::Nu { complex, ext, sel } => format!(
            "nu {}{} {}",
            serialize_complex_ref(complex),
            serialize_ext_ref(ext),
            serialize_sel1(sel)
        ),
        TaskSpec::Delta { complex, ext, sel } => format!(
            "delta {}{} {}",
            serialize_complex_ref(complex),
            serialize_ext_ref(ext),
            serialize_sel1(sel)
        ),
        TaskSpec::Lift {
            complex,
            ext,
            sel,
            granularity,
        } => {
            let g = match granularity {
                None => "",
                Some(GranularitySpec::Class) => " class",
                Some(GranularitySpec::Cocycle) => " cocycle",
            };
            format!(
                "lift {}{} {}{g}",
                serialize_complex_ref(complex),
                serialize_ext_ref(ext),
                serialize_sel1(sel)
            )
        }
        TaskSpec::Exactness { complex, ext } => format!(
            "exactness {}{}",
            serialize_complex_ref(complex),
            serialize_ext_ref(ext)
        ),
        TaskSpec::Square {
            complex,
            ext,
            all_cocycles,
        } => format!(
            "square {}{}{}",
            serialize_complex_ref(complex),
            serialize_ext_ref(ext),
            if *all_cocycles { " all" } else { "" }
        ),
        TaskSpec::Gerbe { complex, ext, sel } => format!(
            "gerbe {}{} {}",
            serialize_complex_ref(complex),
            serialize_ext_ref(ext),
            serialize_sel1(sel)
        ),
        TaskSpec::GaugeClasses { complex, ext, sel } => format!(
            "gauge-classes {}{} {}",
            serialize_complex_ref(complex),
            serialize_ext_ref(ext),
            serialize_sel1(sel)
        ),
        TaskSpec::Realize { complex, ext, sel } => {
            let s = match sel {
                Sel2::Trivial => "trivial".to_string(),
                Sel2::Generator => "generator".to_string(),
                Sel2::Named(n) => n.clone(),
            };
            format!(
                "realize {}{} {s}",
                serialize_complex_ref(complex),
                serialize_ext_ref(ext)
            )
        }
    }
}
