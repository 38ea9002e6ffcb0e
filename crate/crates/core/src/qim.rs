//! Quasi-intuitive acceptance and the languages built on it.
//!
//! A quasi-intuitive machine `Q(x, p)` over a base machine `T` accepts a word
//! `y` when `T` accepts `y` or when `y` lies strictly within distance `p` of
//! the previously accepted word `x`. Everything here is budgeted: constructs
//! that are only semi-decidable report `Unknown` (or `Exhausted`) instead of
//! running forever.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::distance::{DistanceOracle, Threshold};
use crate::tm::{TmError, TmSpec, TmVerdict, WordSource};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QimError {
    #[error(transparent)]
    Machine(#[from] TmError),
    #[error("tm budget must be at least 1")]
    ZeroBudget,
    #[error("level must be at least 1")]
    ZeroLevel,
    #[error("seed word `{0}` is not in L(T)")]
    SeedRejected(String),
    #[error("machine exhausted its budget on `{0}` and no accepted word is similar to it")]
    Undetermined(String),
    #[error("decider contract violated: budget exhausted on `{0}`")]
    DeciderContract(String),
}

fn show(word: &[u8]) -> String {
    String::from_utf8_lossy(word).into_owned()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    Yes,
    No,
    Unknown,
}

impl From<TmVerdict> for Decision {
    fn from(v: TmVerdict) -> Self {
        match v {
            TmVerdict::Yes => Decision::Yes,
            TmVerdict::No => Decision::No,
            TmVerdict::BudgetExhausted => Decision::Unknown,
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Yes => "yes",
            Decision::No => "no",
            Decision::Unknown => "unknown",
        })
    }
}

/// Why a word was accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Via {
    /// The base machine accepted it.
    Machine,
    /// It is similar to this previously accepted word.
    Similar(Vec<u8>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QimConfig {
    pub machine: TmSpec,
    pub p: Threshold,
    pub oracle: DistanceOracle,
    pub tm_budget: u64,
}

impl QimConfig {
    pub fn new(machine: TmSpec, p: Threshold, oracle: DistanceOracle, tm_budget: u64) -> Result<Self, QimError> {
        if tm_budget == 0 {
            return Err(QimError::ZeroBudget);
        }
        Ok(QimConfig { machine, p, oracle, tm_budget })
    }

    fn machine_verdict(&self, word: &[u8]) -> Result<TmVerdict, QimError> {
        Ok(self.machine.run(word, self.tm_budget)?.verdict)
    }

    /// `Q(x, p)(T, y)`: run `T` on `y` under the budget, then test `d(x, y) < p`.
    pub fn accept(&self, x: &[u8], y: &[u8]) -> Result<Decision, QimError> {
        let verdict = self.machine_verdict(y)?;
        if verdict == TmVerdict::Yes || self.oracle.is_similar(self.p, x, y) {
            return Ok(Decision::Yes);
        }
        Ok(verdict.into())
    }
}

/// See [`QimConfig::accept`].
pub fn qim_accept(config: &QimConfig, x: &[u8], y: &[u8]) -> Result<Decision, QimError> {
    config.accept(x, y)
}

/// The growing accepted set of a self-similar run and its indicator history.
///
/// `step` is the index `i` of the current set `I_i`; a fresh state is at
/// step 1 with `I_1 = {seed}` and an empty indicator list.
#[derive(Debug, Clone)]
pub struct SelfSimilarState {
    config: Arc<QimConfig>,
    accepted: Vec<Vec<u8>>,
    members: HashSet<Vec<u8>>,
    seed: Vec<u8>,
    step: usize,
    cis: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOutcome {
    pub indicator: bool,
    pub via: Option<Via>,
}

impl SelfSimilarState {
    /// Fails unless the base machine accepts `seed`.
    pub fn new(config: Arc<QimConfig>, seed: &[u8]) -> Result<Self, QimError> {
        if config.machine_verdict(seed)? != TmVerdict::Yes {
            return Err(QimError::SeedRejected(show(seed)));
        }
        Ok(SelfSimilarState {
            accepted: vec![seed.to_vec()],
            members: HashSet::from([seed.to_vec()]),
            seed: seed.to_vec(),
            step: 1,
            cis: Vec::new(),
            config,
        })
    }

    pub fn config(&self) -> &QimConfig {
        &self.config
    }

    /// Accepted words in insertion order.
    pub fn accepted(&self) -> &[Vec<u8>] {
        &self.accepted
    }

    pub fn contains(&self, word: &[u8]) -> bool {
        self.members.contains(word)
    }

    pub fn seed(&self) -> &[u8] {
        &self.seed
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn cis(&self) -> &[bool] {
        &self.cis
    }

    /// Presents `r` to the acceptor against every accepted word, in insertion
    /// order, stopping at the first witness.
    pub fn decide(&self, r: &[u8]) -> Result<StepOutcome, QimError> {
        let verdict = self.config.machine_verdict(r)?;
        if verdict == TmVerdict::Yes {
            return Ok(StepOutcome { indicator: true, via: Some(Via::Machine) });
        }
        let config = &self.config;
        if let Some(x) = self.accepted.iter().find(|x| config.oracle.is_similar(config.p, x, r)) {
            return Ok(StepOutcome { indicator: true, via: Some(Via::Similar(x.clone())) });
        }
        if verdict == TmVerdict::BudgetExhausted {
            return Err(QimError::Undetermined(show(r)));
        }
        Ok(StepOutcome { indicator: false, via: None })
    }

    /// Returns the successor state and the step's indicator bit.
    pub fn advance(&self, r: &[u8]) -> Result<(SelfSimilarState, StepOutcome), QimError> {
        let outcome = self.decide(r)?;
        let mut next = self.clone();
        if outcome.indicator && next.members.insert(r.to_vec()) {
            next.accepted.push(r.to_vec());
        }
        next.step += 1;
        next.cis.push(outcome.indicator);
        Ok((next, outcome))
    }
}

pub fn self_similar_step(state: &SelfSimilarState, r: &[u8]) -> Result<(SelfSimilarState, bool), QimError> {
    state.advance(r).map(|(s, o)| (s, o.indicator))
}

/// One presented word of a self-similar run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    /// 1-based position of the word in the input sequence.
    pub index: usize,
    pub input: Vec<u8>,
    pub indicator: bool,
    pub via: Option<Via>,
    /// The accepted set after this step, in insertion order.
    pub accepted: Vec<Vec<u8>>,
}

pub fn self_similar_run(config: QimConfig, seed: &[u8], inputs: &[Vec<u8>]) -> Result<Vec<TraceStep>, QimError> {
    let mut state = SelfSimilarState::new(Arc::new(config), seed)?;
    let mut trace = Vec::with_capacity(inputs.len());
    for (i, r) in inputs.iter().enumerate() {
        let (next, outcome) = state.advance(r)?;
        state = next;
        trace.push(TraceStep {
            index: i + 1,
            input: r.clone(),
            indicator: outcome.indicator,
            via: outcome.via,
            accepted: state.accepted.clone(),
        });
    }
    Ok(trace)
}

/// One line per step: `i<TAB>r_i<TAB>c_i<TAB>|I_(i+1)|<TAB>witness`, where
/// the witness column is the similar accepted word, `T` when the base machine
/// accepted, or `-` when the word was rejected.
pub fn format_trace(trace: &[TraceStep]) -> String {
    let mut out = String::new();
    for step in trace {
        let witness = match &step.via {
            Some(Via::Machine) => "T".to_string(),
            Some(Via::Similar(x)) => show(x),
            None => "-".to_string(),
        };
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            step.index,
            show(&step.input),
            u8::from(step.indicator),
            step.accepted.len(),
            witness
        ));
    }
    out
}

/// A candidate member of the universal quasi-intuitive language: an
/// acceptance chain `x_1 .. x_n`, a query `y`, the base machine and `p`.
#[derive(Debug, Clone)]
pub struct QilInstance {
    pub chain: Vec<Vec<u8>>,
    pub query: Vec<u8>,
    pub machine: TmSpec,
    pub p: Threshold,
}

/// `yes` iff `T(x_1) = yes`, every link `Q(x_(i-1), p)(T, x_i)` is yes and
/// `Q(x_n, p)(T, y)` is yes. Any `no` link makes the answer `no`; otherwise
/// any budget-exhausted link makes it `unknown`.
pub fn qil_check(instance: &QilInstance, oracle: &DistanceOracle, tm_budget: u64) -> Result<Decision, QimError> {
    let Some(head) = instance.chain.first() else {
        // An empty chain has no accepted head; it is not a member.
        return Ok(Decision::No);
    };
    let config = QimConfig::new(instance.machine.clone(), instance.p, oracle.clone(), tm_budget)?;
    let mut unknown = false;
    match config.machine_verdict(head)? {
        TmVerdict::Yes => {}
        TmVerdict::No => return Ok(Decision::No),
        TmVerdict::BudgetExhausted => unknown = true,
    }
    let links = instance
        .chain
        .windows(2)
        .map(|w| (&w[0], &w[1]))
        .chain(std::iter::once((instance.chain.last().unwrap_or(head), &instance.query)));
    for (x, y) in links {
        match config.accept(x, y)? {
            Decision::Yes => {}
            Decision::No => return Ok(Decision::No),
            Decision::Unknown => unknown = true,
        }
    }
    Ok(if unknown { Decision::Unknown } else { Decision::Yes })
}

/// Decides membership of `(x, y)` in the similar-words language of a
/// decidable `L`: `decider(x) = yes` and `d(x, y) < p`. Always halts; a
/// decider that exhausts its budget on `x` is a contract violation.
pub fn sw_decide(
    decider: &TmSpec,
    p: Threshold,
    oracle: &DistanceOracle,
    x: &[u8],
    y: &[u8],
    tm_budget: u64,
) -> Result<bool, QimError> {
    match decider.run(x, tm_budget)?.verdict {
        TmVerdict::Yes => Ok(oracle.is_similar(p, x, y)),
        TmVerdict::No => Ok(false),
        TmVerdict::BudgetExhausted => Err(QimError::DeciderContract(show(x))),
    }
}

/// How candidates of `E` are confirmed during a similar-language search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Decidable `E`: each candidate is checked once with this step budget.
    /// One search unit per candidate.
    Filtered { steps: u64 },
    /// Recursively enumerable `E`: candidate `i` is run for `j` steps on
    /// diagonal `i + j - 1`, restarting from scratch each time. One search
    /// unit per (candidate, step-budget) run.
    Dovetailed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// `witness` is the `index`-th (1-based) confirmed member of `E`.
    Found { witness: Vec<u8>, index: usize },
    Exhausted,
}

/// Searches `E` for a member `x` with `d(x, y) < p`, spending at most
/// `search_budget` units.
///
/// `membership(word, steps)` answers whether `word` is in `E` when allowed
/// `steps` steps of work.
pub fn sl_search<I, M>(
    candidates: I,
    mut membership: M,
    mode: SearchMode,
    p: Threshold,
    oracle: &DistanceOracle,
    y: &[u8],
    search_budget: u64,
) -> SearchOutcome
where
    I: IntoIterator<Item = Vec<u8>>,
    M: FnMut(&[u8], u64) -> Decision,
{
    let mut candidates = candidates.into_iter();
    let mut confirmed = 0usize;
    let mut spent = 0u64;
    match mode {
        SearchMode::Filtered { steps } => {
            for x in candidates {
                if spent == search_budget {
                    break;
                }
                spent += 1;
                if membership(&x, steps) == Decision::Yes {
                    confirmed += 1;
                    if oracle.is_similar(p, &x, y) {
                        return SearchOutcome::Found { witness: x, index: confirmed };
                    }
                }
            }
            SearchOutcome::Exhausted
        }
        SearchMode::Dovetailed => {
            // pending[i] is Some(word) while candidate i is unresolved
            let mut pending: Vec<Option<Vec<u8>>> = Vec::new();
            let mut source_done = false;
            let mut diagonal = 0usize;
            loop {
                if !source_done && pending.len() <= diagonal {
                    match candidates.next() {
                        Some(x) => pending.push(Some(x)),
                        None => source_done = true,
                    }
                }
                if source_done && pending.iter().all(Option::is_none) {
                    return SearchOutcome::Exhausted;
                }
                for i in 0..=diagonal.min(pending.len().saturating_sub(1)) {
                    let steps = (diagonal - i + 1) as u64;
                    let Some(x) = pending[i].as_ref() else { continue };
                    if spent == search_budget {
                        return SearchOutcome::Exhausted;
                    }
                    spent += 1;
                    match membership(x, steps) {
                        Decision::Yes => {
                            let x = pending[i].take().unwrap_or_default();
                            confirmed += 1;
                            if oracle.is_similar(p, &x, y) {
                                return SearchOutcome::Found { witness: x, index: confirmed };
                            }
                        }
                        Decision::No => pending[i] = None,
                        Decision::Unknown => {}
                    }
                }
                diagonal += 1;
            }
        }
    }
}

/// Membership of a word in `L(machine)` under a per-call step budget; words
/// outside the input alphabet are not members.
pub fn machine_membership(machine: &TmSpec) -> impl Fn(&[u8], u64) -> Decision + '_ {
    move |word, steps| match machine.run(word, steps.max(1)) {
        Ok(out) => out.verdict.into(),
        Err(_) => Decision::No,
    }
}

/// Membership of `y` in level `level` of the quasi-intuitive closure of
/// `L(T)`: level 1 is `L(T)`, level `k + 1` is `L(T)` together with every
/// word similar to some member of level `k`.
///
/// Members of level `k` are enumerated from `generator`, each confirmed by a
/// recursive level-`k` check. Levels above 1 never answer `no`; a failed
/// search within `search_budget` candidates is `unknown`. Words outside
/// the machine's input alphabet are treated as rejected by `T`.
pub fn qilt_member(
    config: &QimConfig,
    y: &[u8],
    level: usize,
    search_budget: u64,
    generator: &dyn WordSource,
) -> Result<Decision, QimError> {
    if level == 0 {
        return Err(QimError::ZeroLevel);
    }
    let base: Decision = match config.machine.run(y, config.tm_budget) {
        Ok(out) => out.verdict.into(),
        Err(TmError::SymbolOutsideInput { .. }) => Decision::No,
        Err(e) => return Err(e.into()),
    };
    if level == 1 || base == Decision::Yes {
        return Ok(base);
    }
    let lower = level - 1;
    let mut failure = None;
    let membership = |x: &[u8], _steps: u64| match qilt_member(config, x, lower, search_budget, generator) {
        Ok(d) => d,
        Err(e) => {
            failure.get_or_insert(e);
            Decision::No
        }
    };
    let outcome = sl_search(
        generator.words(),
        membership,
        SearchMode::Filtered { steps: config.tm_budget },
        config.p,
        &config.oracle,
        y,
        search_budget,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(match outcome {
        SearchOutcome::Found { .. } => Decision::Yes,
        SearchOutcome::Exhausted => Decision::Unknown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::distance::DistanceTable;
    use crate::tm::{BlockPowers, WordList};

    fn w(s: &str) -> Vec<u8> {
        s.as_bytes().to_vec()
    }

    struct Words {
        s: Vec<u8>,
        r: Vec<Vec<u8>>,
    }

    fn words() -> Words {
        let mut r = vec![Vec::new()];
        r.extend(bundled::example_inputs());
        Words { s: bundled::example_seed(), r }
    }

    fn config(p: f64) -> QimConfig {
        QimConfig::new(
            bundled::anbncn(),
            Threshold::new(p).unwrap(),
            DistanceOracle::Table(bundled::example_table()),
            1_000_000,
        )
        .unwrap()
    }

    #[test]
    fn accept_matches_the_example() {
        let c = config(0.25);
        let Words { s, r } = words();
        assert_eq!(c.accept(&s, &r[2]).unwrap(), Decision::Yes);
        assert_eq!(c.accept(&s, &r[4]).unwrap(), Decision::Yes);
        assert_eq!(c.accept(&s, &r[1]).unwrap(), Decision::No);
        assert!(matches!(c.accept(&s, b"abx"), Err(QimError::Machine(_))));
    }

    #[test]
    fn accept_reports_unknown_on_exhausted_budget() {
        let mut c = config(0.25);
        c.tm_budget = 3;
        let Words { s, r } = words();
        assert_eq!(c.accept(&s, &r[4]).unwrap(), Decision::Unknown);
        // similarity still settles it
        assert_eq!(c.accept(&s, &r[2]).unwrap(), Decision::Yes);
    }

    fn state_with(c: QimConfig, members: &[&Vec<u8>]) -> SelfSimilarState {
        let mut st = SelfSimilarState::new(Arc::new(c), members[0]).unwrap();
        for m in &members[1..] {
            st.members.insert((*m).clone());
            st.accepted.push((*m).clone());
        }
        st
    }

    #[test]
    fn step_rejects_r6() {
        let Words { s, r } = words();
        let st = state_with(config(0.25), &[&s, &r[2], &r[3], &r[4], &r[5]]);
        let (next, c) = self_similar_step(&st, &r[6]).unwrap();
        assert!(!c);
        assert_eq!(next.accepted(), st.accepted());
        assert_eq!(next.cis(), &[false]);
    }

    #[test]
    fn step_accepts_r8_via_r7() {
        let Words { s, r } = words();
        let st = state_with(config(0.25), &[&s, &r[2], &r[3], &r[4], &r[5], &r[7]]);
        let (next, outcome) = st.advance(&r[8]).unwrap();
        assert!(outcome.indicator);
        assert_eq!(outcome.via, Some(Via::Similar(r[7].clone())));
        assert_eq!(next.accepted().last(), Some(&r[8]));
    }

    #[test]
    fn reseeding_keeps_the_set() {
        let Words { s, .. } = words();
        let st = SelfSimilarState::new(Arc::new(config(0.25)), &s).unwrap();
        let (next, outcome) = st.advance(&s).unwrap();
        assert_eq!(outcome, StepOutcome { indicator: true, via: Some(Via::Machine) });
        assert_eq!(next.accepted(), &[s]);
        assert_eq!(next.step(), 2);
    }

    #[test]
    fn exhausted_budget_without_witness_is_an_error() {
        let mut c = config(0.25);
        c.tm_budget = 400;
        let st = SelfSimilarState::new(Arc::new(c), b"abc").unwrap();
        let long = w(&format!("{}{}{}", "a".repeat(30), "b".repeat(30), "c".repeat(30)));
        assert!(matches!(st.advance(&long), Err(QimError::Undetermined(_))));
    }

    #[test]
    fn run_rejects_bad_seed() {
        let Words { r, .. } = words();
        assert!(matches!(self_similar_run(config(0.25), &r[1], &[]), Err(QimError::SeedRejected(_))));
    }

    #[test]
    fn run_edge_cases() {
        let Words { s, .. } = words();
        assert!(self_similar_run(config(0.25), &s, &[]).unwrap().is_empty());
        let trace = self_similar_run(config(0.25), &s, &[s.clone(), s.clone(), s.clone()]).unwrap();
        assert!(trace.iter().all(|t| t.indicator && t.accepted == vec![s.clone()]));
    }

    #[test]
    fn trace_format() {
        let Words { s, r } = words();
        let trace = self_similar_run(config(0.25), &s, &r[1..3]).unwrap();
        let text = format_trace(&trace);
        assert_eq!(
            text,
            "1\taaaaaabbbbbbaaaaaa\t0\t1\t-\n2\taaaaaabbbbbbccc\t1\t2\taaaaaabbbbbbcccccc\n"
        );
    }

    #[test]
    fn qil_examples() {
        let Words { s, r } = words();
        let oracle = DistanceOracle::Table(bundled::example_table());
        let inst = |chain: Vec<Vec<u8>>, query: Vec<u8>| QilInstance {
            chain,
            query,
            machine: bundled::anbncn(),
            p: Threshold::new(0.25).unwrap(),
        };
        assert_eq!(qil_check(&inst(vec![s.clone(), r[2].clone()], r[5].clone()), &oracle, 100_000).unwrap(), Decision::Yes);
        assert_eq!(qil_check(&inst(vec![s.clone(), r[1].clone()], s.clone()), &oracle, 100_000).unwrap(), Decision::No);
        assert_eq!(qil_check(&inst(vec![r[1].clone()], s.clone()), &oracle, 100_000).unwrap(), Decision::No);
        assert_eq!(qil_check(&inst(vec![], s.clone()), &oracle, 100_000).unwrap(), Decision::No);
        // a budget too small to finish T on the head, but every link similar
        assert_eq!(qil_check(&inst(vec![s.clone()], r[2].clone()), &oracle, 5).unwrap(), Decision::Unknown);
    }

    #[test]
    fn sw_examples() {
        let Words { s, r } = words();
        let tm = bundled::anbncn();
        let p = Threshold::new(0.25).unwrap();
        let table = DistanceOracle::Table(bundled::example_table());
        assert!(sw_decide(&tm, p, &table, &s, &r[2], 100_000).unwrap());
        assert!(!sw_decide(&tm, p, &table, &r[1], &s, 100_000).unwrap());
        assert!(!sw_decide(&tm, p, &table, &s, b"zzz", 100_000).unwrap());
        assert!(matches!(sw_decide(&tm, p, &table, &s, &r[2], 3), Err(QimError::DeciderContract(_))));
    }

    #[test]
    fn sl_search_filtered() {
        let Words { s, r } = words();
        let tm = bundled::anbncn();
        let gen = BlockPowers::new(b"abc").unwrap();
        let oracle = DistanceOracle::Table(bundled::example_table());
        let p = Threshold::new(0.25).unwrap();
        let mode = SearchMode::Filtered { steps: 100_000 };
        let found = sl_search(gen.words(), machine_membership(&tm), mode, p, &oracle, &r[2], 6);
        assert_eq!(found, SearchOutcome::Found { witness: s.clone(), index: 6 });
        let short = sl_search(gen.words(), machine_membership(&tm), mode, p, &oracle, &r[2], 3);
        assert_eq!(short, SearchOutcome::Exhausted);

        let zero = DistanceOracle::Table(DistanceTable::new(1.0).unwrap().with(&s, &s, 0.0).unwrap());
        let selfish = sl_search(gen.words(), machine_membership(&tm), mode, p, &zero, &s, 100);
        assert_eq!(selfish, SearchOutcome::Found { witness: s, index: 6 });
    }

    #[test]
    fn sl_search_dovetailed_finds_the_same_witness() {
        let Words { s, r } = words();
        let tm = bundled::anbncn();
        let gen = BlockPowers::new(b"abc").unwrap();
        let oracle = DistanceOracle::Table(bundled::example_table());
        let p = Threshold::new(0.25).unwrap();
        let found = sl_search(gen.words(), machine_membership(&tm), SearchMode::Dovetailed, p, &oracle, &r[2], 1_000_000);
        assert_eq!(found, SearchOutcome::Found { witness: s, index: 6 });
    }

    #[test]
    fn dovetailing_survives_a_diverging_candidate() {
        // the first candidate never halts; the second is confirmed at step 3
        let oracle = DistanceOracle::Table(DistanceTable::new(0.0).unwrap());
        let p = Threshold::new(0.5).unwrap();
        let cands = vec![w("loop"), w("ok")];
        let membership = |x: &[u8], steps: u64| match x {
            b"ok" if steps >= 3 => Decision::Yes,
            _ => Decision::Unknown,
        };
        let out = sl_search(cands.clone(), membership, SearchMode::Dovetailed, p, &oracle, b"y", 100);
        assert_eq!(out, SearchOutcome::Found { witness: w("ok"), index: 1 });
        let out = sl_search(cands, membership, SearchMode::Filtered { steps: 1_000 }, p, &oracle, b"y", 100);
        // filtered mode gives each candidate one fixed budget, so "ok" is found too
        assert_eq!(out, SearchOutcome::Found { witness: w("ok"), index: 1 });
    }

    #[test]
    fn dovetailing_finite_source_exhausts() {
        let oracle = DistanceOracle::Table(DistanceTable::new(1.0).unwrap());
        let p = Threshold::new(0.5).unwrap();
        let out = sl_search(vec![w("a")], |_: &[u8], _| Decision::No, SearchMode::Dovetailed, p, &oracle, b"y", 100);
        assert_eq!(out, SearchOutcome::Exhausted);
    }

    #[test]
    fn qilt_levels() {
        let Words { r, .. } = words();
        let c = config(0.25);
        let gen = BlockPowers::new(b"abc").unwrap();
        assert_eq!(qilt_member(&c, b"abc", 1, 10, &gen).unwrap(), Decision::Yes);
        assert_eq!(qilt_member(&c, &r[1], 1, 10, &gen).unwrap(), Decision::No);
        assert_eq!(qilt_member(&c, &r[2], 2, 6, &gen).unwrap(), Decision::Yes);
        assert_eq!(qilt_member(&c, &r[2], 2, 5, &gen).unwrap(), Decision::Unknown);
        for budget in [1, 10, 40] {
            assert_eq!(qilt_member(&c, &r[6], 2, budget, &gen).unwrap(), Decision::Unknown);
        }
        assert_eq!(qilt_member(&c, b"abc", 0, 10, &gen), Err(QimError::ZeroLevel));
    }

    #[test]
    fn qilt_level_three_chains_through_level_two() {
        // level 2 admits r2 (near s); level 3 admits r5 because d(r2, r5) < p
        let Words { r, .. } = words();
        let c = config(0.25);
        let list = WordList(vec![bundled::example_seed(), r[2].clone()]);
        assert_eq!(qilt_member(&c, &r[5], 2, 10, &WordList(vec![r[2].clone()])).unwrap(), Decision::Unknown);
        assert_eq!(qilt_member(&c, &r[5], 3, 10, &list).unwrap(), Decision::Yes);
    }
}
