//! The textual model format.
//!
//! ```text
//! event uncontrollable pass;
//! event controllable forcible jump;
//!
//! plant Bus {
//!     clock x;
//!     location a: initial invariant x <= 2;
//!     location g: marked;
//!     edge a -> g on pass when x = 2;
//! }
//! ```
//!
//! An automaton's alphabet is the set of events on its edges plus those
//! listed in an optional `alphabet e1, e2;` item.

use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{ClockConstraint, Edge, EventDecl, Kind, Location, Rel, TimedAutomaton};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownReference,
    Duplicate,
    DuplicateInitial,
    MissingInitial,
    RationalConstant,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A parsed file: global event declarations and the automata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelFile {
    pub events: Vec<EventDecl>,
    pub automata: Vec<TimedAutomaton>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(u32),
    Sym(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

const KEYWORDS: &[&str] = &[
    "event", "controllable", "uncontrollable", "forcible", "plant", "requirement", "supervisor",
    "clock", "location", "initial", "marked", "invariant", "edge", "on", "when", "reset", "true",
    "false", "and", "or", "alphabet",
];

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |kind, line, column, message: String| ParseError { kind, line, column, message };
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (start_line, start_col) = (line, col);
        let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line: start_line, column: start_col });
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || matches!(chars[i], '_' | '.' | '\'')) {
                s.push(chars[i]);
                i += 1;
                col += 1;
            }
            push(&mut out, Tok::Ident(s));
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                i += 1;
                col += 1;
            }
            if chars.get(i) == Some(&'.') || chars.get(i) == Some(&'/') {
                return Err(err(
                    ParseErrorKind::RationalConstant,
                    start_line,
                    start_col,
                    "clock constants must be natural numbers".into(),
                ));
            }
            let n = s.parse::<u32>().map_err(|_| {
                err(ParseErrorKind::Syntax, start_line, start_col, format!("constant {s} is too large"))
            })?;
            push(&mut out, Tok::Num(n));
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let sym: Option<&'static str> = match two.as_str() {
            "->" => Some("->"),
            "<=" => Some("<="),
            ">=" => Some(">="),
            "==" => Some("="),
            _ => None,
        };
        if let Some(s) = sym {
            push(&mut out, Tok::Sym(s));
            i += 2;
            col += 2;
            continue;
        }
        let sym = match c {
            '{' => "{",
            '}' => "}",
            '(' => "(",
            ')' => ")",
            ';' => ";",
            ',' => ",",
            ':' => ":",
            '-' => "-",
            '<' => "<",
            '>' => ">",
            '=' => "=",
            _ => {
                return Err(err(ParseErrorKind::Syntax, line, col, format!("unexpected character `{c}`")));
            }
        };
        push(&mut out, Tok::Sym(sym));
        i += 1;
        col += 1;
    }
    out.push(Token { tok: Tok::Eof, line, column: col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, t: &Token, kind: ParseErrorKind, message: String) -> ParseError {
        ParseError { kind, line: t.line, column: t.column, message }
    }

    fn syntax(&self, expected: &str) -> ParseError {
        let t = self.peek();
        let found = match &t.tok {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".into(),
        };
        self.error_at(t, ParseErrorKind::Syntax, format!("expected {expected}, found {found}"))
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.is_keyword(kw) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<()> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            Err(self.syntax(&format!("`{kw}`")))
        }
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if matches!(&self.peek().tok, Tok::Sym(t) if *t == s) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.syntax(&format!("`{s}`")))
        }
    }

    fn name(&mut self) -> PResult<(String, Token)> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.next();
                Ok((s.clone(), t))
            }
            _ => Err(self.syntax("a name")),
        }
    }

    fn names(&mut self) -> PResult<Vec<(String, Token)>> {
        let mut v = vec![self.name()?];
        while self.eat_sym(",") {
            v.push(self.name()?);
        }
        Ok(v)
    }

    fn constraint(&mut self) -> PResult<(ClockConstraint, Vec<(String, Token)>)> {
        let mut clocks = Vec::new();
        let c = self.disjunction(&mut clocks)?;
        Ok((c, clocks))
    }

    fn disjunction(&mut self, clocks: &mut Vec<(String, Token)>) -> PResult<ClockConstraint> {
        let mut c = self.conjunction(clocks)?;
        while self.eat_keyword("or") {
            let d = self.conjunction(clocks)?;
            c = ClockConstraint::Or(Box::new(c), Box::new(d));
        }
        Ok(c)
    }

    fn conjunction(&mut self, clocks: &mut Vec<(String, Token)>) -> PResult<ClockConstraint> {
        let mut c = self.atom(clocks)?;
        while self.eat_keyword("and") {
            let d = self.atom(clocks)?;
            c = ClockConstraint::And(Box::new(c), Box::new(d));
        }
        Ok(c)
    }

    fn atom(&mut self, clocks: &mut Vec<(String, Token)>) -> PResult<ClockConstraint> {
        if self.eat_keyword("true") {
            return Ok(ClockConstraint::True);
        }
        if self.eat_keyword("false") {
            return Ok(ClockConstraint::False);
        }
        if self.eat_sym("(") {
            let c = self.disjunction(clocks)?;
            self.expect_sym(")")?;
            return Ok(c);
        }
        let x = self.name()?;
        let y = if self.eat_sym("-") { Some(self.name()?) } else { None };
        let rel = match &self.peek().tok {
            Tok::Sym(s @ ("<" | "<=" | "=" | ">=" | ">")) => *s,
            _ => return Err(self.syntax("a comparison")),
        };
        self.next();
        let n = match self.peek().tok {
            Tok::Num(n) => n,
            _ => return Err(self.syntax("a natural constant")),
        };
        self.next();
        let make = |r: Rel| match &y {
            Some((y, _)) => ClockConstraint::DiffAtom(x.0.clone(), y.clone(), r, n),
            None => ClockConstraint::Atom(x.0.clone(), r, n),
        };
        let c = match rel {
            "<" => make(Rel::Lt),
            "=" => make(Rel::Eq),
            ">" => make(Rel::Gt),
            "<=" => ClockConstraint::Or(Box::new(make(Rel::Lt)), Box::new(make(Rel::Eq))),
            _ => ClockConstraint::Or(Box::new(make(Rel::Gt)), Box::new(make(Rel::Eq))),
        };
        clocks.push(x);
        clocks.extend(y);
        Ok(c)
    }

    fn file(&mut self) -> PResult<ModelFile> {
        let mut events: Vec<EventDecl> = Vec::new();
        let mut automata = Vec::new();
        loop {
            if matches!(self.peek().tok, Tok::Eof) {
                break;
            }
            if self.eat_keyword("event") {
                let mut controllable = true;
                if self.eat_keyword("uncontrollable") {
                    controllable = false;
                } else {
                    self.eat_keyword("controllable");
                }
                let forcible = self.eat_keyword("forcible");
                let (name, tok) = self.name()?;
                self.expect_sym(";")?;
                if events.iter().any(|e| e.name == name) {
                    return Err(self.error_at(&tok, ParseErrorKind::Duplicate, format!("event `{name}` declared twice")));
                }
                events.push(EventDecl { name, controllable, forcible });
                continue;
            }
            let kind = if self.eat_keyword("plant") {
                Kind::Plant
            } else if self.eat_keyword("requirement") {
                Kind::Requirement
            } else if self.eat_keyword("supervisor") {
                Kind::Supervisor
            } else {
                return Err(self.syntax("`event`, `plant`, `requirement` or `supervisor`"));
            };
            automata.push(self.automaton(kind, &events)?);
        }
        Ok(ModelFile { events, automata })
    }

    fn automaton(&mut self, kind: Kind, events: &[EventDecl]) -> PResult<TimedAutomaton> {
        let (name, name_tok) = self.name()?;
        self.expect_sym("{")?;
        let mut clocks: Vec<String> = Vec::new();
        let mut locations: Vec<Location> = Vec::new();
        let mut initial: Option<usize> = None;
        let mut alphabet: Vec<String> = Vec::new();
        let mut pending_clocks: Vec<(String, Token)> = Vec::new();
        let mut raw_edges: Vec<((String, Token), (String, Token), (String, Token), ClockConstraint, Vec<(String, Token)>)> =
            Vec::new();
        while !self.eat_sym("}") {
            if self.eat_keyword("clock") {
                for (c, tok) in self.names()? {
                    if clocks.contains(&c) {
                        return Err(self.error_at(&tok, ParseErrorKind::Duplicate, format!("clock `{c}` declared twice")));
                    }
                    clocks.push(c);
                }
                self.expect_sym(";")?;
            } else if self.eat_keyword("alphabet") {
                for (e, tok) in self.names()? {
                    if !events.iter().any(|d| d.name == e) {
                        return Err(self.error_at(&tok, ParseErrorKind::UnknownReference, format!("unknown event `{e}`")));
                    }
                    alphabet.push(e);
                }
                self.expect_sym(";")?;
            } else if self.eat_keyword("location") {
                let (lname, tok) = self.name()?;
                if locations.iter().any(|l| l.name == lname) {
                    return Err(self.error_at(&tok, ParseErrorKind::Duplicate, format!("location `{lname}` declared twice")));
                }
                let mut marked = false;
                if self.eat_sym(":") {
                    loop {
                        let attr = self.peek().clone();
                        if self.eat_keyword("initial") {
                            if initial.is_some() {
                                return Err(self.error_at(&attr, ParseErrorKind::DuplicateInitial, format!("second initial location in `{name}`")));
                            }
                            initial = Some(locations.len());
                        } else if self.eat_keyword("marked") {
                            marked = true;
                        } else {
                            return Err(self.syntax("`initial` or `marked`"));
                        }
                        if !self.eat_sym(",") {
                            break;
                        }
                    }
                }
                let invariant = if self.eat_keyword("invariant") {
                    let (c, cl) = self.constraint()?;
                    pending_clocks.extend(cl);
                    c
                } else {
                    ClockConstraint::True
                };
                self.expect_sym(";")?;
                locations.push(Location { name: lname, marked, invariant });
            } else if self.eat_keyword("edge") {
                let src = self.name()?;
                self.expect_sym("->")?;
                let tgt = self.name()?;
                self.expect_keyword("on")?;
                let ev = self.name()?;
                let guard = if self.eat_keyword("when") {
                    let (c, cl) = self.constraint()?;
                    pending_clocks.extend(cl);
                    c
                } else {
                    ClockConstraint::True
                };
                let resets = if self.eat_keyword("reset") { self.names()? } else { Vec::new() };
                self.expect_sym(";")?;
                raw_edges.push((src, tgt, ev, guard, resets));
            } else {
                return Err(self.syntax("`clock`, `location`, `edge`, `alphabet` or `}`"));
            }
        }
        let unknown = |t: &Token, what: &str, n: &str| ParseError {
            kind: ParseErrorKind::UnknownReference,
            line: t.line,
            column: t.column,
            message: format!("unknown {what} `{n}`"),
        };
        for (c, tok) in &pending_clocks {
            if !clocks.contains(c) {
                return Err(unknown(tok, "clock", c));
            }
        }
        let initial = initial.ok_or_else(|| {
            self.error_at(&name_tok, ParseErrorKind::MissingInitial, format!("`{name}` has no initial location"))
        })?;
        let loc = |n: &(String, Token)| {
            locations.iter().position(|l| l.name == n.0).ok_or_else(|| unknown(&n.1, "location", &n.0))
        };
        let mut edges = Vec::new();
        for (src, tgt, ev, guard, resets) in raw_edges {
            if !events.iter().any(|d| d.name == ev.0) {
                return Err(unknown(&ev.1, "event", &ev.0));
            }
            let mut rs = Vec::new();
            for (c, tok) in resets {
                if !clocks.contains(&c) {
                    return Err(unknown(&tok, "clock", &c));
                }
                rs.push(c);
            }
            rs.sort();
            rs.dedup();
            if !alphabet.contains(&ev.0) {
                alphabet.push(ev.0.clone());
            }
            edges.push(Edge { source: loc(&src)?, event: ev.0, guard, resets: rs, target: loc(&tgt)? });
        }
        let events = events.iter().filter(|d| alphabet.contains(&d.name)).cloned().collect();
        Ok(TimedAutomaton { name, kind, clocks, events, locations, initial, edges })
    }
}

impl ModelFile {
    pub fn parse(src: &str) -> Result<ModelFile, ParseError> {
        let toks = lex(src)?;
        Parser { toks, pos: 0 }.file()
    }

    /// Collects the declarations of every event used by `automata`.
    pub fn from_automata(automata: Vec<TimedAutomaton>) -> ModelFile {
        let mut events: Vec<EventDecl> = Vec::new();
        for a in &automata {
            for e in &a.events {
                if !events.iter().any(|d| d.name == e.name) {
                    events.push(e.clone());
                }
            }
        }
        ModelFile { events, automata }
    }

    pub fn serialize(&self) -> String {
        let mut s = String::new();
        for e in &self.events {
            let _ = writeln!(
                s,
                "event {}{} {};",
                if e.controllable { "controllable" } else { "uncontrollable" },
                if e.forcible { " forcible" } else { "" },
                e.name
            );
        }
        for a in &self.automata {
            s.push('\n');
            s.push_str(&serialize_automaton(a));
        }
        s
    }
}

pub fn parse_model(src: &str) -> Result<Vec<TimedAutomaton>, ParseError> {
    ModelFile::parse(src).map(|f| f.automata)
}

/// Parses a lone clock constraint such as `x < 2 and x - y <= 1`.
pub fn parse_constraint(src: &str) -> Result<ClockConstraint, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let (c, _) = p.constraint()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.syntax("end of constraint"));
    }
    Ok(c)
}

fn serialize_automaton(a: &TimedAutomaton) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {} {{", a.kind.keyword(), a.name);
    if !a.clocks.is_empty() {
        let _ = writeln!(s, "    clock {};", a.clocks.join(", "));
    }
    let unused: Vec<&str> = a
        .events
        .iter()
        .filter(|e| !a.edges.iter().any(|x| x.event == e.name))
        .map(|e| e.name.as_str())
        .collect();
    if !unused.is_empty() {
        let _ = writeln!(s, "    alphabet {};", unused.join(", "));
    }
    for (i, l) in a.locations.iter().enumerate() {
        let mut attrs = Vec::new();
        if i == a.initial {
            attrs.push("initial");
        }
        if l.marked {
            attrs.push("marked");
        }
        let _ = write!(s, "    location {}", l.name);
        if !attrs.is_empty() {
            let _ = write!(s, ": {}", attrs.join(", "));
        }
        if l.invariant != ClockConstraint::True {
            let _ = write!(s, " invariant {}", l.invariant);
        }
        s.push_str(";\n");
    }
    for e in &a.edges {
        let _ = write!(s, "    edge {} -> {} on {}", a.locations[e.source].name, a.locations[e.target].name, e.event);
        if e.guard != ClockConstraint::True {
            let _ = write!(s, " when {}", e.guard);
        }
        if !e.resets.is_empty() {
            let _ = write!(s, " reset {}", e.resets.join(", "));
        }
        s.push_str(";\n");
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const BUS: &str = "
        // endangered pedestrian
        event uncontrollable pass;
        event controllable forcible jump;
        plant Bus {
            clock x;
            location a: initial invariant x <= 2;
            location g: marked;
            edge a -> g on pass when x = 2;
        }
    ";

    #[test]
    fn parse_and_round_trip() {
        let f = ModelFile::parse(BUS).unwrap();
        assert_eq!(f.automata.len(), 1);
        let a = &f.automata[0];
        assert_eq!(a.locations[0].invariant.to_string(), "x <= 2");
        assert_eq!(a.events.len(), 1);
        let text = f.serialize();
        let g = ModelFile::parse(&text).unwrap();
        assert_eq!(g, f);
        assert_eq!(g.serialize(), text);
    }

    #[test]
    fn errors_carry_positions() {
        let e = ModelFile::parse("plant P {\n  clock x;\n  location a: initial invariant x < 2.5;\n}").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::RationalConstant);
        assert_eq!((e.line, e.column), (3, 37));

        let e = ModelFile::parse("plant P { location a; }").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MissingInitial);

        let e = ModelFile::parse("plant P { location a: initial; location b: initial; }").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DuplicateInitial);

        let e = ModelFile::parse("event e;\nplant P { location a: initial; edge a -> b on e; }").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownReference);
        assert_eq!(e.line, 2);

        let e = ModelFile::parse("plant P { clock x; location a: initial invariant y < 1; }").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownReference);

        let e = ModelFile::parse("plant P { location a: initial }").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Syntax);
    }

    #[test]
    fn precedence_and_parentheses() {
        let f = ModelFile::parse(
            "event e; plant P { clock x, y; location a: initial; edge a -> a on e when (x < 1 or x > 3) and x - y >= 2 reset y, x; }",
        )
        .unwrap();
        let e = &f.automata[0].edges[0];
        assert_eq!(e.guard.to_string(), "(x < 1 or x > 3) and x - y >= 2");
        assert_eq!(e.resets, ["x", "y"]);
    }
}
