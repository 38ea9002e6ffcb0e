//! Deterministic single-tape Turing machines with mandatory step budgets,
//! plus canonical (length-then-lexicographic) word enumeration.
//!
//! Machines are described in a small line-oriented text format; see
//! `docs/tm-format.md` for the grammar. Symbols are single bytes and words
//! are byte strings.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

/// Index of a state inside a [`TmSpec`].
pub type StateId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TmError {
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {message}")]
    Semantic { line: usize, message: String },
    #[error("symbol {symbol:?} is not in the input alphabet")]
    SymbolOutsideInput { symbol: char },
    #[error("step budget must be positive")]
    ZeroBudget,
    #[error("alphabet must be nonempty with distinct symbols")]
    InvalidAlphabet,
}

impl TmError {
    fn syntax(line: usize, message: impl Into<String>) -> Self {
        TmError::Syntax { line, message: message.into() }
    }

    fn semantic(line: usize, message: impl Into<String>) -> Self {
        TmError::Semantic { line, message: message.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    Left,
    Right,
    Stay,
}

impl Move {
    fn letter(self) -> char {
        match self {
            Move::Left => 'L',
            Move::Right => 'R',
            Move::Stay => 'S',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transition {
    pub next: StateId,
    pub write: u8,
    pub movement: Move,
}

/// A validated deterministic Turing machine.
///
/// Every transition target is a declared state, every written symbol is in
/// the tape alphabet, the blank is in the tape alphabet but not the input
/// alphabet, and there is at most one transition per `(state, symbol)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TmSpec {
    states: Vec<String>,
    input_alphabet: BTreeSet<u8>,
    tape_alphabet: BTreeSet<u8>,
    blank: u8,
    transitions: HashMap<(StateId, u8), Transition>,
    start: StateId,
    accept: StateId,
    reject: Option<StateId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TmVerdict {
    Yes,
    No,
    BudgetExhausted,
}

impl fmt::Display for TmVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TmVerdict::Yes => "yes",
            TmVerdict::No => "no",
            TmVerdict::BudgetExhausted => "budget_exhausted",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TmOutcome {
    pub verdict: TmVerdict,
    pub steps_used: u64,
}

impl TmSpec {
    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, id: StateId) -> &str {
        &self.states[id]
    }

    pub fn input_alphabet(&self) -> &BTreeSet<u8> {
        &self.input_alphabet
    }

    pub fn tape_alphabet(&self) -> &BTreeSet<u8> {
        &self.tape_alphabet
    }

    pub fn blank(&self) -> u8 {
        self.blank
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn accept(&self) -> StateId {
        self.accept
    }

    pub fn reject(&self) -> Option<StateId> {
        self.reject
    }

    pub fn transition(&self, state: StateId, symbol: u8) -> Option<&Transition> {
        self.transitions.get(&(state, symbol))
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    /// Checks that every symbol of `word` belongs to the input alphabet.
    pub fn check_word(&self, word: &[u8]) -> Result<(), TmError> {
        match word.iter().find(|b| !self.input_alphabet.contains(b)) {
            Some(&b) => Err(TmError::SymbolOutsideInput { symbol: b as char }),
            None => Ok(()),
        }
    }

    /// Simulates the machine on `word` for at most `budget` transitions.
    ///
    /// Reaching the accept state yields `Yes`; reaching the reject state or a
    /// configuration with no applicable transition yields `No`. The tape is
    /// unbounded in both directions.
    pub fn run(&self, word: &[u8], budget: u64) -> Result<TmOutcome, TmError> {
        if budget == 0 {
            return Err(TmError::ZeroBudget);
        }
        self.check_word(word)?;

        let mut tape: VecDeque<u8> = word.iter().copied().collect();
        if tape.is_empty() {
            tape.push_back(self.blank);
        }
        let mut head = 0usize;
        let mut state = self.start;
        let mut steps = 0u64;

        loop {
            if state == self.accept {
                return Ok(TmOutcome { verdict: TmVerdict::Yes, steps_used: steps });
            }
            if Some(state) == self.reject {
                return Ok(TmOutcome { verdict: TmVerdict::No, steps_used: steps });
            }
            let Some(t) = self.transitions.get(&(state, tape[head])) else {
                return Ok(TmOutcome { verdict: TmVerdict::No, steps_used: steps });
            };
            if steps == budget {
                return Ok(TmOutcome {
                    verdict: TmVerdict::BudgetExhausted,
                    steps_used: steps,
                });
            }
            tape[head] = t.write;
            state = t.next;
            match t.movement {
                Move::Left => {
                    if head == 0 {
                        tape.push_front(self.blank);
                    } else {
                        head -= 1;
                    }
                }
                Move::Right => {
                    head += 1;
                    if head == tape.len() {
                        tape.push_back(self.blank);
                    }
                }
                Move::Stay => {}
            }
            steps += 1;
        }
    }

    /// Renders the machine back into the text format accepted by [`parse_tm`].
    pub fn to_text(&self) -> String {
        let join = |set: &BTreeSet<u8>| {
            set.iter().map(|&b| (b as char).to_string()).collect::<Vec<_>>().join(" ")
        };
        let mut out = String::new();
        out.push_str(&format!("states: {}\n", self.states.join(" ")));
        out.push_str(&format!("input: {}\n", join(&self.input_alphabet)));
        out.push_str(&format!("tape: {}\n", join(&self.tape_alphabet)));
        out.push_str(&format!("blank: {}\n", self.blank as char));
        out.push_str(&format!("start: {}\n", self.states[self.start]));
        out.push_str(&format!("accept: {}\n", self.states[self.accept]));
        if let Some(r) = self.reject {
            out.push_str(&format!("reject: {}\n", self.states[r]));
        }
        let mut rules: Vec<_> = self.transitions.iter().collect();
        rules.sort_by_key(|((s, sym), _)| (*s, *sym));
        for ((s, sym), t) in rules {
            out.push_str(&format!(
                "{} {} -> {} {} {}\n",
                self.states[*s],
                *sym as char,
                self.states[t.next],
                t.write as char,
                t.movement.letter()
            ));
        }
        out
    }
}

const HEADERS: [&str; 7] = ["states", "input", "tape", "blank", "start", "accept", "reject"];

fn parse_symbol(line: usize, token: &str) -> Result<u8, TmError> {
    let bytes = token.as_bytes();
    if bytes.len() != 1 || !bytes[0].is_ascii_graphic() || bytes[0] == b'#' {
        return Err(TmError::syntax(
            line,
            format!("symbol `{token}` must be a single printable ASCII character other than `#`"),
        ));
    }
    Ok(bytes[0])
}

fn parse_move(line: usize, token: &str) -> Result<Move, TmError> {
    match token {
        "L" => Ok(Move::Left),
        "R" => Ok(Move::Right),
        "S" => Ok(Move::Stay),
        _ => Err(TmError::syntax(line, format!("move must be L, R or S, found `{token}`"))),
    }
}

struct RawRule<'a> {
    line: usize,
    from: &'a str,
    read: u8,
    to: &'a str,
    write: u8,
    movement: Move,
}

/// Parses and validates a machine description.
pub fn parse_tm(text: &str) -> Result<TmSpec, TmError> {
    let mut headers: HashMap<&str, (usize, Vec<&str>)> = HashMap::new();
    let mut rules = Vec::new();
    let mut last_line = 1;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some((key, value)) = content.split_once(':') {
            let key = key.trim();
            if !HEADERS.contains(&key) {
                return Err(TmError::syntax(line, format!("unknown header `{key}`")));
            }
            if headers.contains_key(key) {
                return Err(TmError::syntax(line, format!("duplicate header `{key}`")));
            }
            let values: Vec<&str> = value.split_whitespace().collect();
            if values.is_empty() {
                return Err(TmError::syntax(line, format!("header `{key}` has no value")));
            }
            headers.insert(key, (line, values));
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() != 6 || tokens[2] != "->" {
            return Err(TmError::syntax(
                line,
                "expected `state symbol -> state symbol move`",
            ));
        }
        rules.push(RawRule {
            line,
            from: tokens[0],
            read: parse_symbol(line, tokens[1])?,
            to: tokens[3],
            write: parse_symbol(line, tokens[4])?,
            movement: parse_move(line, tokens[5])?,
        });
    }

    let required = |key: &str| {
        headers
            .get(key)
            .cloned()
            .ok_or_else(|| TmError::syntax(last_line, format!("missing `{key}:` header")))
    };
    let single = |key: &str| -> Result<(usize, &str), TmError> {
        let (line, values) = required(key)?;
        if values.len() != 1 {
            return Err(TmError::syntax(line, format!("`{key}:` takes exactly one value")));
        }
        Ok((line, values[0]))
    };

    let (states_line, state_names) = required("states")?;
    let mut states: Vec<String> = Vec::new();
    let mut state_ids: HashMap<&str, StateId> = HashMap::new();
    for name in &state_names {
        if state_ids.insert(name, states.len()).is_some() {
            return Err(TmError::semantic(states_line, format!("state `{name}` declared twice")));
        }
        states.push(name.to_string());
    }
    let lookup = |line: usize, name: &str| {
        state_ids
            .get(name)
            .copied()
            .ok_or_else(|| TmError::semantic(line, format!("unknown state `{name}`")))
    };

    let symbol_set = |key: &str| -> Result<(usize, BTreeSet<u8>), TmError> {
        let (line, values) = required(key)?;
        let mut set = BTreeSet::new();
        for v in values {
            if !set.insert(parse_symbol(line, v)?) {
                return Err(TmError::semantic(line, format!("symbol `{v}` listed twice")));
            }
        }
        Ok((line, set))
    };
    let (input_line, input_alphabet) = symbol_set("input")?;
    let (tape_line, tape_alphabet) = symbol_set("tape")?;

    let (blank_line, blank_token) = single("blank")?;
    let blank = parse_symbol(blank_line, blank_token)?;
    if input_alphabet.contains(&blank) {
        return Err(TmError::semantic(blank_line, "blank symbol must not be in the input alphabet"));
    }
    if !tape_alphabet.contains(&blank) {
        return Err(TmError::semantic(tape_line, "tape alphabet must contain the blank"));
    }
    if let Some(s) = input_alphabet.iter().find(|s| !tape_alphabet.contains(s)) {
        return Err(TmError::semantic(
            input_line,
            format!("input symbol `{}` is missing from the tape alphabet", *s as char),
        ));
    }

    let (start_line, start_name) = single("start")?;
    let start = lookup(start_line, start_name)?;
    let (accept_line, accept_name) = single("accept")?;
    let accept = lookup(accept_line, accept_name)?;
    let reject = match headers.get("reject") {
        Some(_) => {
            let (line, name) = single("reject")?;
            let id = lookup(line, name)?;
            if id == accept {
                return Err(TmError::semantic(line, "accept and reject states must differ"));
            }
            Some(id)
        }
        None => None,
    };

    let mut transitions = HashMap::new();
    for rule in rules {
        let from = lookup(rule.line, rule.from)?;
        let next = lookup(rule.line, rule.to)?;
        for sym in [rule.read, rule.write] {
            if !tape_alphabet.contains(&sym) {
                return Err(TmError::semantic(
                    rule.line,
                    format!("symbol `{}` is not in the tape alphabet", sym as char),
                ));
            }
        }
        let t = Transition { next, write: rule.write, movement: rule.movement };
        if transitions.insert((from, rule.read), t).is_some() {
            return Err(TmError::semantic(
                rule.line,
                format!("duplicate transition for ({}, {})", rule.from, rule.read as char),
            ));
        }
    }

    Ok(TmSpec {
        states,
        input_alphabet,
        tape_alphabet,
        blank,
        transitions,
        start,
        accept,
        reject,
    })
}

/// Convenience wrapper around [`TmSpec::run`].
pub fn run_tm(spec: &TmSpec, word: &[u8], budget: u64) -> Result<TmOutcome, TmError> {
    spec.run(word, budget)
}

/// Canonical enumeration of all words over an ordered alphabet: shorter words
/// first, words of equal length in lexicographic order of the alphabet.
/// Index 0 is the empty word.
#[derive(Debug, Clone)]
pub struct CanonicalWords {
    alphabet: Vec<u8>,
    digits: Vec<usize>,
}

fn validate_alphabet(alphabet: &[u8]) -> Result<(), TmError> {
    let distinct: BTreeSet<_> = alphabet.iter().collect();
    if alphabet.is_empty() || distinct.len() != alphabet.len() {
        return Err(TmError::InvalidAlphabet);
    }
    Ok(())
}

impl CanonicalWords {
    pub fn new(alphabet: &[u8]) -> Result<Self, TmError> {
        Self::starting_at(alphabet, 0)
    }

    /// Positions the enumeration so that the next word yielded is the one at
    /// `index`.
    pub fn starting_at(alphabet: &[u8], index: u64) -> Result<Self, TmError> {
        validate_alphabet(alphabet)?;
        let k = alphabet.len() as u128;
        let mut rest = index as u128;
        let mut len = 0usize;
        let mut block = 1u128;
        while rest >= block {
            rest -= block;
            len += 1;
            block = block.saturating_mul(k);
        }
        let mut digits = vec![0usize; len];
        for d in digits.iter_mut().rev() {
            *d = (rest % k) as usize;
            rest /= k;
        }
        Ok(CanonicalWords { alphabet: alphabet.to_vec(), digits })
    }
}

impl Iterator for CanonicalWords {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        let word = self.digits.iter().map(|&d| self.alphabet[d]).collect();
        let k = self.alphabet.len();
        let mut carried = true;
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < k {
                carried = false;
                break;
            }
            *d = 0;
        }
        if carried {
            self.digits.push(0);
        }
        Some(word)
    }
}

/// Returns the words at positions `start_index .. start_index + count` of the
/// canonical order over `alphabet`.
pub fn enumerate_words(alphabet: &[u8], start_index: u64, count: usize) -> Result<Vec<Vec<u8>>, TmError> {
    Ok(CanonicalWords::starting_at(alphabet, start_index)?.take(count).collect())
}

/// A restartable source of candidate words.
pub trait WordSource {
    fn words(&self) -> Box<dyn Iterator<Item = Vec<u8>> + '_>;
}

impl WordSource for CanonicalWords {
    fn words(&self) -> Box<dyn Iterator<Item = Vec<u8>> + '_> {
        Box::new(self.clone())
    }
}

/// Generates `s1^n s2^n ... sk^n` for `n = 1, 2, ...`; with symbols `abc`
/// this lists `{ a^n b^n c^n }` in order.
#[derive(Debug, Clone)]
pub struct BlockPowers {
    symbols: Vec<u8>,
}

impl BlockPowers {
    pub fn new(symbols: &[u8]) -> Result<Self, TmError> {
        validate_alphabet(symbols)?;
        Ok(BlockPowers { symbols: symbols.to_vec() })
    }

    pub fn nth_word(&self, n: usize) -> Vec<u8> {
        self.symbols.iter().flat_map(|&s| std::iter::repeat_n(s, n)).collect()
    }
}

impl WordSource for BlockPowers {
    fn words(&self) -> Box<dyn Iterator<Item = Vec<u8>> + '_> {
        Box::new((1..).map(move |n| self.nth_word(n)))
    }
}

/// A finite, explicit list of words.
#[derive(Debug, Clone, Default)]
pub struct WordList(pub Vec<Vec<u8>>);

impl WordSource for WordList {
    fn words(&self) -> Box<dyn Iterator<Item = Vec<u8>> + '_> {
        Box::new(self.0.iter().cloned())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    fn anbncn() -> TmSpec {
        parse_tm(bundled::ANBNCN_TM).unwrap()
    }

    fn w(s: &str) -> Vec<u8> {
        s.as_bytes().to_vec()
    }

    #[test]
    fn bundled_machine_parses() {
        let tm = anbncn();
        assert_eq!(tm.states().len(), 6);
        assert_eq!(tm.blank(), b'_');
        assert_eq!(tm.input_alphabet().iter().copied().collect::<Vec<_>>(), b"abc");
        assert_eq!(tm.reject(), None);
    }

    #[test]
    fn empty_file_is_a_syntax_error() {
        assert!(matches!(parse_tm(""), Err(TmError::Syntax { .. })));
        assert!(matches!(parse_tm("# only a comment\n"), Err(TmError::Syntax { .. })));
    }

    #[test]
    fn undeclared_target_state_is_semantic_error() {
        let text = "states: a b\ninput: 0\ntape: 0 _\nblank: _\nstart: a\naccept: b\na 0 -> ghost 0 R\n";
        let err = parse_tm(text).unwrap_err();
        assert_eq!(err, TmError::semantic(7, "unknown state `ghost`"));
    }

    #[test]
    fn semantic_errors() {
        let base = "states: a b\ninput: 0\ntape: 0 _\nblank: _\nstart: a\naccept: b\n";
        let dup = format!("{base}a 0 -> b 0 R\na 0 -> a 0 L\n");
        assert!(matches!(parse_tm(&dup), Err(TmError::Semantic { line: 8, .. })));

        let blank_in_input = "states: a b\ninput: 0 _\ntape: 0 _\nblank: _\nstart: a\naccept: b\n";
        assert!(matches!(parse_tm(blank_in_input), Err(TmError::Semantic { line: 4, .. })));

        let foreign_symbol = format!("{base}a 0 -> b 7 R\n");
        assert!(matches!(parse_tm(&foreign_symbol), Err(TmError::Semantic { .. })));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let text = "states: a b\ninput: 0\ntape: 0 _\nblank: _\nstart: a\naccept: b\na 0 => b 0 R\n";
        assert!(matches!(parse_tm(text), Err(TmError::Syntax { line: 7, .. })));
        let bad_move = "states: a b\ninput: 0\ntape: 0 _\nblank: _\nstart: a\naccept: b\na 0 -> b 0 X\n";
        assert!(matches!(parse_tm(bad_move), Err(TmError::Syntax { line: 7, .. })));
    }

    #[test]
    fn text_round_trip() {
        let tm = anbncn();
        assert_eq!(parse_tm(&tm.to_text()).unwrap(), tm);
    }

    #[test]
    fn runs_from_the_example() {
        let tm = anbncn();
        assert_eq!(tm.run(b"abc", 10_000).unwrap().verdict, TmVerdict::Yes);
        let s = w("aaaaaabbbbbbcccccc");
        assert_eq!(tm.run(&s, 1_000_000).unwrap().verdict, TmVerdict::Yes);
        let r1 = w("aaaaaabbbbbbaaaaaa");
        assert_eq!(tm.run(&r1, 1_000_000).unwrap().verdict, TmVerdict::No);
        let out = tm.run(b"abc", 1).unwrap();
        assert_eq!(out, TmOutcome { verdict: TmVerdict::BudgetExhausted, steps_used: 1 });
    }

    #[test]
    fn rejects_foreign_symbols_and_zero_budget() {
        let tm = anbncn();
        assert_eq!(tm.run(b"abd", 10), Err(TmError::SymbolOutsideInput { symbol: 'd' }));
        assert_eq!(tm.run(b"abc", 0), Err(TmError::ZeroBudget));
    }

    #[test]
    fn empty_word_is_rejected() {
        assert_eq!(anbncn().run(b"", 10).unwrap().verdict, TmVerdict::No);
    }

    #[test]
    fn left_move_at_origin_grows_the_tape() {
        let text = "states: a b c\ninput: 1\ntape: 1 _\nblank: _\nstart: a\naccept: c\n\
                    a 1 -> b 1 L\nb _ -> c 1 R\n";
        let tm = parse_tm(text).unwrap();
        assert_eq!(tm.run(b"1", 10).unwrap(), TmOutcome { verdict: TmVerdict::Yes, steps_used: 2 });
    }

    #[test]
    fn explicit_reject_state() {
        let text = "states: a y n\ninput: 1\ntape: 1 _\nblank: _\nstart: a\naccept: y\nreject: n\n\
                    a 1 -> n 1 S\n";
        let tm = parse_tm(text).unwrap();
        assert_eq!(tm.run(b"1", 10).unwrap(), TmOutcome { verdict: TmVerdict::No, steps_used: 1 });
    }

    #[test]
    fn canonical_enumeration() {
        let words = enumerate_words(b"01", 0, 7).unwrap();
        let expect: Vec<Vec<u8>> = ["", "0", "1", "00", "01", "10", "11"].iter().map(|s| w(s)).collect();
        assert_eq!(words, expect);
        assert_eq!(enumerate_words(b"01", 5, 1).unwrap(), vec![w("10")]);
        assert_eq!(enumerate_words(b"abc", 1, 3).unwrap(), vec![w("a"), w("b"), w("c")]);
        assert_eq!(enumerate_words(b"", 0, 1), Err(TmError::InvalidAlphabet));
        assert_eq!(enumerate_words(b"aa", 0, 1), Err(TmError::InvalidAlphabet));
    }

    #[test]
    fn block_powers() {
        let g = BlockPowers::new(b"abc").unwrap();
        let first: Vec<_> = g.words().take(2).collect();
        assert_eq!(first, vec![w("abc"), w("aabbcc")]);
        assert_eq!(g.nth_word(6), w("aaaaaabbbbbbcccccc"));
    }
}
