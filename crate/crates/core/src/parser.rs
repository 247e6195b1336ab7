//! Concrete syntax: a recursive-descent formula parser with a canonical
//! renderer, and the JSON model document format.
//!
//! Formula grammar (loosest binding first):
//!
//! ```text
//! formula := iff
//! iff     := imp { "<->" imp }
//! imp     := or [ "->" imp ]
//! or      := and { "|" and }
//! and     := unary { "&" unary }
//! unary   := "~" unary | "K" AGENT unary
//!          | "[!" formula "]" unary | "<!" formula ">" unary
//!          | "[" group [ "," formula ] "]" unary | "<" group [ "," formula ] ">" unary
//!          | "[<" group ">]" unary | "<[" group "]>" unary
//!          | "(" formula ")" | "top" | "bot" | ATOM
//! group   := "{" [ AGENT { "," AGENT } ] "}"
//! ```

use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{is_identifier, Agent, Formula, Group};
use crate::model::{EpistemicModel, ModelError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Tilde,
    Bang,
    LBrack,
    RBrack,
    Lt,
    Gt,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Amp,
    Pipe,
    Arrow,
    DArrow,
    Know,
    Top,
    Bot,
    Ident(String),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Tilde => "`~`",
            Tok::Bang => "`!`",
            Tok::LBrack => "`[`",
            Tok::RBrack => "`]`",
            Tok::Lt => "`<`",
            Tok::Gt => "`>`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::Comma => "`,`",
            Tok::Amp => "`&`",
            Tok::Pipe => "`|`",
            Tok::Arrow => "`->`",
            Tok::DArrow => "`<->`",
            Tok::Know => "`K`",
            Tok::Top => "`top`",
            Tok::Bot => "`bot`",
            Tok::Ident(name) => return write!(f, "`{name}`"),
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, column);
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
        let (tok, width) = if rest.starts_with("<->") {
            (Tok::DArrow, 3)
        } else if rest.starts_with("->") {
            (Tok::Arrow, 2)
        } else {
            match c {
                '~' => (Tok::Tilde, 1),
                '!' => (Tok::Bang, 1),
                '[' => (Tok::LBrack, 1),
                ']' => (Tok::RBrack, 1),
                '<' => (Tok::Lt, 1),
                '>' => (Tok::Gt, 1),
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                '{' => (Tok::LBrace, 1),
                '}' => (Tok::RBrace, 1),
                ',' => (Tok::Comma, 1),
                '&' => (Tok::Amp, 1),
                '|' => (Tok::Pipe, 1),
                'K' => (Tok::Know, 1),
                c if c.is_ascii_lowercase() => {
                    let mut j = i;
                    while j < chars.len()
                        && (chars[j].is_ascii_lowercase()
                            || chars[j].is_ascii_digit()
                            || chars[j] == '_')
                    {
                        j += 1;
                    }
                    let word: String = chars[i..j].iter().collect();
                    let tok = match word.as_str() {
                        "top" => Tok::Top,
                        "bot" => Tok::Bot,
                        _ => Tok::Ident(word),
                    };
                    (tok, j - i)
                }
                other => {
                    return Err(ParseError {
                        line: l0,
                        column: c0,
                        message: format!("unknown operator `{other}`"),
                        expected: vec![],
                    })
                }
            }
        };
        i += width;
        column += width;
        out.push(Spanned {
            tok,
            line: l0,
            column: c0,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>, expected: &[&str]) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError {
            line: s.line,
            column: s.column,
            message: message.into(),
            expected: expected.iter().map(|e| e.to_string()).collect(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            let want = tok.to_string();
            Err(self.error(format!("unexpected {}", self.peek()), &[&want]))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while *self.peek() == Tok::DArrow {
            self.bump();
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn agent(&mut self) -> Result<Agent, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(Agent::new(name).expect("lexer only yields identifiers"))
            }
            other => Err(self.error(format!("unexpected {other}"), &["agent name"])),
        }
    }

    fn group(&mut self) -> Result<Group, ParseError> {
        self.expect(Tok::LBrace)?;
        let mut g = Group::new();
        if *self.peek() != Tok::RBrace {
            g.insert(self.agent()?);
            while *self.peek() == Tok::Comma {
                self.bump();
                g.insert(self.agent()?);
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(g)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Know => {
                self.bump();
                let a = self.agent()?;
                Ok(Formula::know(a, self.unary()?))
            }
            Tok::LBrack => match self.peek2().clone() {
                Tok::Bang => {
                    self.bump();
                    self.bump();
                    let ann = self.formula()?;
                    self.expect(Tok::RBrack)?;
                    Ok(Formula::ann(ann, self.unary()?))
                }
                Tok::LBrace => {
                    self.bump();
                    let g = self.group()?;
                    let context = self.group_context()?;
                    self.expect(Tok::RBrack)?;
                    Ok(Formula::rel_group(g, context, self.unary()?))
                }
                Tok::Lt => {
                    self.bump();
                    self.bump();
                    let g = self.group()?;
                    self.expect(Tok::Gt)?;
                    self.expect(Tok::RBrack)?;
                    Ok(Formula::coal(g, self.unary()?))
                }
                _ => {
                    self.bump();
                    Err(self.error(
                        format!("unknown operator `[` followed by {}", self.peek()),
                        &["`!`", "`{`", "`<`"],
                    ))
                }
            },
            Tok::Lt => match self.peek2().clone() {
                Tok::Bang => {
                    self.bump();
                    self.bump();
                    let ann = self.formula()?;
                    self.expect(Tok::Gt)?;
                    Ok(Formula::ann_dual(ann, self.unary()?))
                }
                Tok::LBrace => {
                    self.bump();
                    let g = self.group()?;
                    let context = self.group_context()?;
                    self.expect(Tok::Gt)?;
                    Ok(Formula::rel_group_dual(g, context, self.unary()?))
                }
                Tok::LBrack => {
                    self.bump();
                    self.bump();
                    let g = self.group()?;
                    self.expect(Tok::RBrack)?;
                    self.expect(Tok::Gt)?;
                    Ok(Formula::coal_dual(g, self.unary()?))
                }
                _ => {
                    self.bump();
                    Err(self.error(
                        format!("unknown operator `<` followed by {}", self.peek()),
                        &["`!`", "`{`", "`[`"],
                    ))
                }
            },
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Top => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::Bot => {
                self.bump();
                Ok(Formula::Bot)
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Atom(name))
            }
            other => Err(self.error(
                format!("unexpected {other}"),
                &["atom", "`top`", "`bot`", "`~`", "`K`", "`(`", "`[`", "`<`"],
            )),
        }
    }

    fn group_context(&mut self) -> Result<Formula, ParseError> {
        if *self.peek() == Tok::Comma {
            self.bump();
            self.formula()
        } else {
            Ok(Formula::Top)
        }
    }
}

/// Parses a formula. `[{G}] φ` is read as `[{G}, top] φ`.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(
            format!("unexpected {} after complete formula", p.peek()),
            &["end of input", "binary connective"],
        ));
    }
    Ok(f)
}

/// Canonical text: every binary connective below the top level is
/// parenthesised, so `parse_formula(render_formula(f)) == f`.
pub fn render_formula(f: &Formula) -> String {
    let mut out = String::new();
    render_into(f, true, &mut out);
    out
}

fn render_group(g: &Group, out: &mut String) {
    out.push('{');
    for (i, a) in g.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(a.name());
    }
    out.push('}');
}

fn render_into(f: &Formula, top: bool, out: &mut String) {
    use Formula::*;
    let binary = |op: &str, l: &Formula, r: &Formula, out: &mut String| {
        if !top {
            out.push('(');
        }
        render_into(l, false, out);
        out.push(' ');
        out.push_str(op);
        out.push(' ');
        render_into(r, false, out);
        if !top {
            out.push(')');
        }
    };
    match f {
        Atom(p) => out.push_str(p),
        Top => out.push_str("top"),
        Bot => out.push_str("bot"),
        Not(g) => {
            out.push('~');
            render_into(g, false, out);
        }
        And(l, r) => binary("&", l, r, out),
        Or(l, r) => binary("|", l, r, out),
        Imp(l, r) => binary("->", l, r, out),
        Iff(l, r) => binary("<->", l, r, out),
        Know(a, g) => {
            out.push_str("K ");
            out.push_str(a.name());
            out.push(' ');
            render_into(g, false, out);
        }
        KnowDual(a, g) => {
            out.push_str("~K ");
            out.push_str(a.name());
            out.push_str(" ~");
            render_into(g, false, out);
        }
        Ann(l, r) => {
            out.push_str("[! ");
            render_into(l, true, out);
            out.push_str("] ");
            render_into(r, false, out);
        }
        AnnDual(l, r) => {
            out.push_str("<! ");
            render_into(l, true, out);
            out.push_str("> ");
            render_into(r, false, out);
        }
        RelGroup(g, c, r) | RelGroupDual(g, c, r) => {
            let dual = matches!(f, RelGroupDual(..));
            out.push(if dual { '<' } else { '[' });
            render_group(g, out);
            out.push_str(", ");
            render_into(c, true, out);
            out.push_str(if dual { "> " } else { "] " });
            render_into(r, false, out);
        }
        Coal(g, r) => {
            out.push_str("[<");
            render_group(g, out);
            out.push_str(">] ");
            render_into(r, false, out);
        }
        CoalDual(g, r) => {
            out.push_str("<[");
            render_group(g, out);
            out.push_str("]> ");
            render_into(r, false, out);
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_formula(self))
    }
}

// ---------------------------------------------------------------------------
// Model documents

/// The on-disk shape of an epistemic model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub agents: Vec<String>,
    pub atoms: Vec<String>,
    pub states: Vec<String>,
    /// state -> atoms true there
    pub valuation: IndexMap<String, Vec<String>>,
    /// agent -> blocks of indistinguishable states
    pub partitions: IndexMap<String, Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub designated: Option<String>,
}

impl ModelDocument {
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        serde_json::from_str(text).map_err(|e| ModelError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    /// Validates the document and builds the model.
    pub fn to_model(&self) -> Result<EpistemicModel, ModelError> {
        for name in self.agents.iter().chain(&self.atoms).chain(&self.states) {
            if !is_identifier(name) {
                return Err(ModelError::InvalidName(name.clone()));
            }
        }
        let state_index = |name: &str| {
            self.states
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| ModelError::UnknownState(name.to_string()))
        };
        let mut valuation = vec![Vec::new(); self.atoms.len()];
        for (state, atoms) in &self.valuation {
            let s = state_index(state)?;
            for atom in atoms {
                let p = self
                    .atoms
                    .iter()
                    .position(|a| a == atom)
                    .ok_or_else(|| ModelError::UndeclaredAtom(atom.clone()))?;
                valuation[p].push(s);
            }
        }
        if let Some(missing) = self
            .states
            .iter()
            .find(|s| !self.valuation.contains_key(*s))
        {
            return Err(ModelError::MissingValuation(missing.clone()));
        }
        for agent in self.partitions.keys() {
            if !self.agents.contains(agent) {
                return Err(ModelError::UnknownAgent(agent.clone()));
            }
        }
        let mut partitions = Vec::with_capacity(self.agents.len());
        for agent in &self.agents {
            let blocks = self
                .partitions
                .get(agent)
                .ok_or_else(|| ModelError::MissingPartition(agent.clone()))?;
            let mut idx_blocks = Vec::with_capacity(blocks.len());
            for block in blocks {
                idx_blocks.push(
                    block
                        .iter()
                        .map(|s| state_index(s))
                        .collect::<Result<Vec<_>, _>>()?,
                );
            }
            partitions.push(idx_blocks);
        }
        let agents = self
            .agents
            .iter()
            .map(|a| Agent::new(a.clone()).map_err(|_| ModelError::InvalidName(a.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(d) = &self.designated {
            state_index(d)?;
        }
        EpistemicModel::new(
            self.states.clone(),
            agents,
            self.atoms.clone(),
            partitions,
            valuation,
        )
    }

    pub fn from_model(m: &EpistemicModel, designated: Option<usize>) -> Self {
        let name = |s: usize| m.state_name(s).to_string();
        ModelDocument {
            agents: m.agents().iter().map(|a| a.name().to_string()).collect(),
            atoms: m.atoms().to_vec(),
            states: m.state_names().to_vec(),
            valuation: (0..m.len())
                .map(|s| {
                    let atoms = (0..m.atoms().len())
                        .filter(|&p| m.atom_set(p).contains(s))
                        .map(|p| m.atoms()[p].clone())
                        .collect();
                    (name(s), atoms)
                })
                .collect(),
            partitions: m
                .agents()
                .iter()
                .enumerate()
                .map(|(a, agent)| {
                    let blocks = m
                        .blocks(a)
                        .iter()
                        .map(|b| b.iter().map(name).collect())
                        .collect();
                    (agent.name().to_string(), blocks)
                })
                .collect(),
            designated: designated.map(name),
        }
    }

    /// JSON with one line per map entry and inline arrays.
    pub fn render(&self) -> String {
        fn list(items: &[String]) -> String {
            let inner: Vec<String> = items
                .iter()
                .map(|s| serde_json::to_string(s).expect("string serialises"))
                .collect();
            format!("[{}]", inner.join(", "))
        }
        fn key(s: &str) -> String {
            serde_json::to_string(s).expect("string serialises")
        }
        let mut out = String::from("{\n");
        out.push_str(&format!("  \"agents\": {},\n", list(&self.agents)));
        out.push_str(&format!("  \"atoms\": {},\n", list(&self.atoms)));
        out.push_str(&format!("  \"states\": {},\n", list(&self.states)));
        out.push_str("  \"valuation\": {\n");
        let n = self.valuation.len();
        for (i, (s, atoms)) in self.valuation.iter().enumerate() {
            let sep = if i + 1 < n { "," } else { "" };
            out.push_str(&format!("    {}: {}{}\n", key(s), list(atoms), sep));
        }
        out.push_str("  },\n  \"partitions\": {\n");
        let n = self.partitions.len();
        for (i, (a, blocks)) in self.partitions.iter().enumerate() {
            let sep = if i + 1 < n { "," } else { "" };
            let blocks: Vec<String> = blocks.iter().map(|b| list(b)).collect();
            out.push_str(&format!("    {}: [{}]{}\n", key(a), blocks.join(", "), sep));
        }
        out.push_str("  }");
        if let Some(d) = &self.designated {
            out.push_str(&format!(",\n  \"designated\": {}", key(d)));
        }
        out.push_str("\n}\n");
        out
    }
}

/// Parses and validates a model document.
pub fn parse_model(text: &str) -> Result<EpistemicModel, ModelError> {
    ModelDocument::parse(text)?.to_model()
}

pub fn render_model(m: &EpistemicModel) -> String {
    ModelDocument::from_model(m, None).render()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::group;

    fn atom(s: &str) -> Formula {
        Formula::atom(s)
    }

    fn agent(s: &str) -> Agent {
        Agent::new(s).unwrap()
    }

    #[test]
    fn parses_announcement_example() {
        let f = parse_formula("[! ~p] K c ~p").unwrap();
        assert_eq!(
            f,
            Formula::ann(
                Formula::not(atom("p")),
                Formula::know(agent("c"), Formula::not(atom("p")))
            )
        );
    }

    #[test]
    fn parses_constants_and_coalitions() {
        assert_eq!(parse_formula("top").unwrap(), Formula::Top);
        assert_eq!(parse_formula("bot").unwrap(), Formula::Bot);
        let f = parse_formula("<[{a,b}]> (~K c ~p & ~K c p)").unwrap();
        let body = Formula::and(
            Formula::not(Formula::know(agent("c"), Formula::not(atom("p")))),
            Formula::not(Formula::know(agent("c"), atom("p"))),
        );
        assert_eq!(f, Formula::coal_dual(group(["a", "b"]), body));
        assert_eq!(
            parse_formula("[<{}>] p").unwrap(),
            Formula::coal(Group::new(), atom("p"))
        );
    }

    #[test]
    fn group_sugar_and_relativised_forms() {
        assert_eq!(
            parse_formula("[{a,b}] p").unwrap(),
            parse_formula("[{a,b}, top] p").unwrap()
        );
        assert_eq!(
            parse_formula("<{a}, q -> r> p").unwrap(),
            Formula::rel_group_dual(group(["a"]), Formula::imp(atom("q"), atom("r")), atom("p"))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse_formula("p -> q -> r").unwrap(),
            Formula::imp(atom("p"), Formula::imp(atom("q"), atom("r")))
        );
        assert_eq!(
            parse_formula("p | q & r").unwrap(),
            Formula::or(atom("p"), Formula::and(atom("q"), atom("r")))
        );
        assert_eq!(
            parse_formula("~p & K a q <-> r").unwrap(),
            Formula::iff(
                Formula::and(
                    Formula::not(atom("p")),
                    Formula::know(agent("a"), atom("q"))
                ),
                atom("r")
            )
        );
        assert_eq!(
            parse_formula("[! p] q & r").unwrap(),
            Formula::and(Formula::ann(atom("p"), atom("q")), atom("r"))
        );
    }

    #[test]
    fn render_examples() {
        assert_eq!(
            render_formula(&Formula::know(agent("a"), atom("p"))),
            "K a p"
        );
        assert_eq!(
            render_formula(&Formula::rel_group(group(["a"]), Formula::Top, atom("q"))),
            "[{a}, top] q"
        );
        assert_eq!(
            render_formula(&Formula::coal(Group::new(), atom("p"))),
            "[<{}>] p"
        );
        assert_eq!(
            render_formula(&parse_formula("p -> K a (p -> p)").unwrap()),
            "p -> K a (p -> p)"
        );
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_formula("p &").unwrap_err();
        assert_eq!((e.line, e.column), (1, 4));
        let e = parse_formula("p q").unwrap_err();
        assert_eq!((e.line, e.column), (1, 3));
        assert!(e.message.contains("after complete formula"));
        let e = parse_formula("p $ q").unwrap_err();
        assert!(e.message.contains("unknown operator"));
        assert_eq!((e.line, e.column), (1, 3));
        let e = parse_formula("p &\n [? q] r").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_formula("[{a} p").unwrap_err();
        assert!(!e.expected.is_empty());
        let e = parse_formula("").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
    }

    #[test]
    fn model_document_errors() {
        let doc = r#"{"agents":["a"],"atoms":["p"],"states":["w","v"],
            "valuation":{"w":[],"v":["p"]},"partitions":{"a":[["w"]]}}"#;
        let err = parse_model(doc).unwrap_err();
        assert!(
            err.to_string().contains("does not cover state `v`"),
            "{err}"
        );

        let doc = r#"{"agents":["a"],"atoms":["p"],"states":["w","w"],
            "valuation":{"w":[]},"partitions":{"a":[["w"]]}}"#;
        assert!(matches!(
            parse_model(doc),
            Err(ModelError::DuplicateState(_))
        ));

        let doc = r#"{"agents":["a"],"atoms":["p"],"states":["w"],
            "valuation":{"w":["q"]},"partitions":{"a":[["w"]]}}"#;
        assert!(matches!(
            parse_model(doc),
            Err(ModelError::UndeclaredAtom(_))
        ));

        let doc = r#"{"agents":["a"],"atoms":["p"],"states":["w"],
            "valuation":{"w":[]},"partitions":{"a":[["w","u"]]}}"#;
        assert!(matches!(parse_model(doc), Err(ModelError::UnknownState(_))));

        let doc = r#"{"agents":["a"],"atoms":["p"],"states":["w", "v"],
            "valuation":{"w":[], "v":[]},"partitions":{"a":[["w","v"],["v"]]}}"#;
        assert!(matches!(
            parse_model(doc),
            Err(ModelError::OverlappingBlocks { .. })
        ));

        let doc = r#"{"agents":["a"], "atoms":[]"#;
        assert!(matches!(parse_model(doc), Err(ModelError::Syntax { .. })));
    }

    #[test]
    fn minimal_document_renders() {
        let doc = r#"{"agents":["a"],"atoms":["p"],"states":["w"],
            "valuation":{"w":["p"]},"partitions":{"a":[["w"]]}}"#;
        let m = parse_model(doc).unwrap();
        let text = render_model(&m);
        assert_eq!(
            text,
            "{\n  \"agents\": [\"a\"],\n  \"atoms\": [\"p\"],\n  \"states\": [\"w\"],\n  \
             \"valuation\": {\n    \"w\": [\"p\"]\n  },\n  \"partitions\": {\n    \
             \"a\": [[\"w\"]]\n  }\n}\n"
        );
        assert_eq!(parse_model(&text).unwrap(), m);
    }
}
