//! ConsciousJ-lite: a small declarative language that binds an agent's
//! predicted inputs to tick-scheduled predictors and names a builtin
//! behavior.
//!
//! ```text
//! program := "conscious" "agent" IDENT "{" item* "}"
//! item    := "predicted" "int" IDENT ";"
//!          | "bind" IDENT "->" pexpr ("when" "tick" "<" INT)? ";"
//!          | "behavior" IDENT ";"
//! pexpr   := "simple_past" "(" ")" | "ar" "(" INT ")"
//!          | "kalman" "(" REAL "," REAL ")"
//! ```
//!
//! Whitespace is insignificant and `//` starts a comment running to the end
//! of the line.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::predict::{PredictorSpec, Rule, Schedule};
use crate::sim::{run_game, GameConfig, GameResult, SimError, Strategy};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DslError {
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{line}:{column}: {message}")]
    Semantic { line: usize, column: usize, message: String },
    #[error("behavior `{0}` is not registered (known: chase)")]
    UnknownBehavior(String),
    #[error("agent must declare exactly one predicted input to drive the game, found {0}")]
    PredictedInputs(usize),
    #[error("invalid schedule for `{0}`")]
    Schedule(String),
    #[error(transparent)]
    Sim(#[from] SimError),
}

impl DslError {
    /// `(line, column)` for parse errors.
    pub fn position(&self) -> Option<(usize, usize)> {
        match self {
            DslError::Syntax { line, column, .. } | DslError::Semantic { line, column, .. } => Some((*line, *column)),
            _ => None,
        }
    }
}

/// Builtin behaviors an agent can name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Behavior {
    /// Step one row per tick toward the target row.
    Chase,
}

impl Behavior {
    pub fn lookup(name: &str) -> Option<Behavior> {
        match name {
            "chase" => Some(Behavior::Chase),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Binding {
    pub param: String,
    pub predictor: PredictorSpec,
    /// Active while `tick < guard`; `None` is the fallback rule.
    pub guard: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    pub agent_name: String,
    pub predicted_params: Vec<String>,
    pub bindings: Vec<Binding>,
    pub behavior: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Sym(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Number(s) => write!(f, "number `{s}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, DslError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let start = (line, column);
        let token = |tok| Token { tok, line: start.0, column: start.1 };
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
        } else if c.is_whitespace() {
            i += 1;
            column += 1;
        } else if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push(token(Tok::Sym("->")));
            i += 2;
            column += 2;
        } else if let Some(sym) = ["{", "}", "(", ")", ";", ",", "<"].into_iter().find(|s| s.starts_with(c)) {
            out.push(token(Tok::Sym(sym)));
            i += 1;
            column += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let s = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            column += i - s;
            out.push(token(Tok::Ident(chars[s..i].iter().collect())));
        } else if c.is_ascii_digit() || c == '.' {
            let s = i;
            while i < chars.len() {
                let d = chars[i];
                let exponent_sign = (d == '+' || d == '-') && matches!(chars[i - 1], 'e' | 'E');
                if d.is_ascii_digit() || d == '.' || d == 'e' || d == 'E' || exponent_sign {
                    i += 1;
                } else {
                    break;
                }
            }
            column += i - s;
            out.push(token(Tok::Number(chars[s..i].iter().collect())));
        } else {
            return Err(DslError::Syntax { line, column, message: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn here(&self) -> (usize, usize) {
        self.tokens.get(self.pos).map_or(self.end, |t| (t.line, t.column))
    }

    fn syntax<T>(&self, message: String) -> Result<T, DslError> {
        let (line, column) = self.here();
        Err(DslError::Syntax { line, column, message })
    }

    fn found(&self) -> String {
        self.tokens.get(self.pos).map_or_else(|| "end of input".to_string(), |t| t.tok.to_string())
    }

    fn expect_sym(&mut self, sym: &str) -> Result<(), DslError> {
        match self.tokens.get(self.pos) {
            Some(Token { tok: Tok::Sym(s), .. }) if *s == sym => {
                self.pos += 1;
                Ok(())
            }
            _ => self.syntax(format!("expected `{sym}`, found {}", self.found())),
        }
    }

    fn peek_sym(&self, sym: &str) -> bool {
        matches!(self.tokens.get(self.pos), Some(Token { tok: Tok::Sym(s), .. }) if *s == sym)
    }

    fn ident(&mut self) -> Result<String, DslError> {
        match self.tokens.get(self.pos) {
            Some(Token { tok: Tok::Ident(s), .. }) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => self.syntax(format!("expected identifier, found {}", self.found())),
        }
    }

    fn keyword(&mut self, word: &str) -> Result<(), DslError> {
        match self.tokens.get(self.pos) {
            Some(Token { tok: Tok::Ident(s), .. }) if s == word => {
                self.pos += 1;
                Ok(())
            }
            _ => self.syntax(format!("expected `{word}`, found {}", self.found())),
        }
    }

    fn number(&mut self) -> Result<String, DslError> {
        match self.tokens.get(self.pos) {
            Some(Token { tok: Tok::Number(s), .. }) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => self.syntax(format!("expected number, found {}", self.found())),
        }
    }

    fn int(&mut self) -> Result<u64, DslError> {
        let at = self.here();
        let s = self.number()?;
        s.parse().map_err(|_| DslError::Syntax {
            line: at.0,
            column: at.1,
            message: format!("`{s}` is not an integer literal"),
        })
    }

    fn real(&mut self) -> Result<f64, DslError> {
        let at = self.here();
        let s = self.number()?;
        s.parse().map_err(|_| DslError::Syntax {
            line: at.0,
            column: at.1,
            message: format!("`{s}` is not a number"),
        })
    }

    fn pexpr(&mut self) -> Result<PredictorSpec, DslError> {
        let (line, column) = self.here();
        let name = self.ident()?;
        let semantic = |message: String| DslError::Semantic { line, column, message };
        self.expect_sym("(")?;
        let spec = match name.as_str() {
            "simple_past" => Ok(PredictorSpec::SimplePast),
            "ar" => {
                let order = self.int()?;
                PredictorSpec::ar(usize::try_from(order).unwrap_or(usize::MAX)).map_err(|e| semantic(e.to_string()))
            }
            "kalman" => {
                let q = self.real()?;
                self.expect_sym(",")?;
                let r = self.real()?;
                PredictorSpec::kalman(q, r).map_err(|e| semantic(e.to_string()))
            }
            other => return Err(semantic(format!("unknown predictor `{other}` (expected simple_past, ar or kalman)"))),
        }?;
        self.expect_sym(")")?;
        Ok(spec)
    }
}

struct Located<T> {
    value: T,
    line: usize,
    column: usize,
}

/// Parses and validates a program. Never panics.
pub fn parse_dsl(text: &str) -> Result<Program, DslError> {
    let tokens = lex(text)?;
    let end = match text.rsplit_once('\n') {
        Some((head, tail)) => (head.matches('\n').count() + 2, tail.chars().count() + 1),
        None => (1, text.chars().count() + 1),
    };
    let mut p = Parser { tokens, pos: 0, end };

    p.keyword("conscious")?;
    p.keyword("agent")?;
    let agent_name = p.ident()?;
    p.expect_sym("{")?;

    let mut params: Vec<Located<String>> = Vec::new();
    let mut bindings: Vec<Located<Binding>> = Vec::new();
    let mut behaviors: Vec<Located<String>> = Vec::new();
    while !p.peek_sym("}") {
        let (line, column) = p.here();
        let kw = match p.tokens.get(p.pos) {
            Some(Token { tok: Tok::Ident(s), .. }) if matches!(s.as_str(), "predicted" | "bind" | "behavior") => s.clone(),
            _ => return p.syntax(format!("expected `predicted`, `bind`, `behavior` or `}}`, found {}", p.found())),
        };
        p.pos += 1;
        match kw.as_str() {
            "predicted" => {
                p.keyword("int")?;
                let (line, column) = p.here();
                let name = p.ident()?;
                p.expect_sym(";")?;
                params.push(Located { value: name, line, column });
            }
            "bind" => {
                let param = p.ident()?;
                p.expect_sym("->")?;
                let predictor = p.pexpr()?;
                let guard = if p.peek_sym(";") {
                    None
                } else {
                    p.keyword("when")?;
                    p.keyword("tick")?;
                    p.expect_sym("<")?;
                    Some(p.int()?)
                };
                p.expect_sym(";")?;
                bindings.push(Located { value: Binding { param, predictor, guard }, line, column });
            }
            _ => {
                let name = p.ident()?;
                p.expect_sym(";")?;
                behaviors.push(Located { value: name, line, column });
            }
        }
    }
    p.expect_sym("}")?;
    if p.pos < p.tokens.len() {
        return p.syntax(format!("unexpected {} after the agent body", p.found()));
    }

    validate(agent_name, params, bindings, behaviors, p.here())
}

fn validate(
    agent_name: String,
    params: Vec<Located<String>>,
    bindings: Vec<Located<Binding>>,
    behaviors: Vec<Located<String>>,
    end: (usize, usize),
) -> Result<Program, DslError> {
    let semantic = |line, column, message| Err(DslError::Semantic { line, column, message });

    for (i, p) in params.iter().enumerate() {
        if params[..i].iter().any(|q| q.value == p.value) {
            return semantic(p.line, p.column, format!("predicted input `{}` declared twice", p.value));
        }
    }
    for (i, b) in bindings.iter().enumerate() {
        let name = &b.value.param;
        if !params.iter().any(|p| &p.value == name) {
            return semantic(b.line, b.column, format!("binding to undeclared predicted input `{name}`"));
        }
        let earlier: Vec<&Binding> = bindings[..i].iter().map(|l| &l.value).filter(|e| &e.param == name).collect();
        if earlier.iter().any(|e| e.guard.is_none()) {
            let message = if b.value.guard.is_none() {
                format!("duplicate unguarded binding for `{name}`")
            } else {
                format!("guarded binding for `{name}` after its unguarded binding")
            };
            return semantic(b.line, b.column, message);
        }
        if let (Some(prev), Some(bound)) = (earlier.last().and_then(|e| e.guard), b.value.guard) {
            if bound <= prev {
                return semantic(b.line, b.column, format!("guard `tick < {bound}` does not increase on `tick < {prev}`"));
            }
        }
    }
    for p in &params {
        if !bindings.iter().any(|b| b.value.param == p.value && b.value.guard.is_none()) {
            return semantic(p.line, p.column, format!("`{}` has no unguarded binding", p.value));
        }
    }
    let behavior = match behaviors.as_slice() {
        [] => return semantic(end.0, end.1, "no behavior declared".to_string()),
        [b] if Behavior::lookup(&b.value).is_none() => {
            return semantic(b.line, b.column, format!("unknown behavior `{}` (known: chase)", b.value))
        }
        [b] => b.value.clone(),
        [_, second, ..] => return semantic(second.line, second.column, "behavior declared twice".to_string()),
    };

    Ok(Program {
        agent_name,
        predicted_params: params.into_iter().map(|p| p.value).collect(),
        bindings: bindings.into_iter().map(|b| b.value).collect(),
        behavior,
    })
}

fn write_pexpr(out: &mut String, spec: &PredictorSpec) {
    let _ = match spec {
        PredictorSpec::SimplePast => write!(out, "simple_past()"),
        PredictorSpec::Ar { order, .. } => write!(out, "ar({order})"),
        PredictorSpec::Kalman { q, r } => write!(out, "kalman({q:?}, {r:?})"),
    };
}

/// Canonical source text; `parse_dsl(&pretty_print(p)) == Ok(p)` for any
/// valid program.
pub fn pretty_print(program: &Program) -> String {
    let mut out = format!("conscious agent {} {{\n", program.agent_name);
    for p in &program.predicted_params {
        let _ = writeln!(out, "    predicted int {p};");
    }
    for b in &program.bindings {
        let _ = write!(out, "    bind {} -> ", b.param);
        write_pexpr(&mut out, &b.predictor);
        if let Some(bound) = b.guard {
            let _ = write!(out, " when tick < {bound}");
        }
        out.push_str(";\n");
    }
    let _ = writeln!(out, "    behavior {};", program.behavior);
    out.push_str("}\n");
    out
}

/// An agent ready to drop into a game.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentBinding {
    pub schedule: Schedule,
    pub behavior: Behavior,
}

impl AgentBinding {
    pub fn strategy(&self) -> Strategy {
        match self.behavior {
            Behavior::Chase => Strategy::Intuitive(self.schedule.clone()),
        }
    }
}

/// Turns the program's bindings into a schedule: guards become tick bounds
/// and the unguarded binding the final rule.
pub fn bind_agent(program: &Program) -> Result<AgentBinding, DslError> {
    let behavior = Behavior::lookup(&program.behavior).ok_or_else(|| DslError::UnknownBehavior(program.behavior.clone()))?;
    let [param] = program.predicted_params.as_slice() else {
        return Err(DslError::PredictedInputs(program.predicted_params.len()));
    };
    let rules = program
        .bindings
        .iter()
        .filter(|b| &b.param == param)
        .map(|b| Rule { bound: b.guard, predictor: b.predictor })
        .collect();
    let schedule = Schedule::new(rules).map_err(|_| DslError::Schedule(param.clone()))?;
    Ok(AgentBinding { schedule, behavior })
}

/// `run_game` with player P driven by the program.
pub fn run_dsl_game(program: &Program, base: &GameConfig) -> Result<GameResult, DslError> {
    let agent = bind_agent(program)?;
    let config = GameConfig { strategy_p: agent.strategy(), ..base.clone() };
    Ok(run_game(&config)?)
}
