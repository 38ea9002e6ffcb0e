//! Input predictors and indicator sequences.
//!
//! Three predictor families are provided: simple past (repeat the last
//! observation), AR(p) fitted by ridge-regularized least squares over a
//! trailing window, and a 1-D constant-velocity Kalman filter. A
//! [`Schedule`] switches between them by tick, and a [`ScheduleRunner`]
//! feeds them one observation per tick.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::distance::Compressor;

/// Ridge added to the diagonal of the AR normal equations.
pub const AR_RIDGE: f64 = 1e-9;

/// Default verdict threshold of [`randomness_proxy`].
pub const DEFAULT_RANDOMNESS_THRESHOLD: f64 = 0.95;

/// Minimum number of bits accepted by [`randomness_proxy`].
pub const MIN_PROXY_BITS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PredictError {
    #[error("history is empty")]
    EmptyHistory,
    #[error("history has {len} values but the AR window needs {window}")]
    ShortHistory { len: usize, window: usize },
    #[error("AR order must be at least 1 and the window at least 2*order+1 (order {order}, window {window})")]
    InvalidAr { order: usize, window: usize },
    #[error("Kalman noise parameters must be positive and finite (q {q}, r {r})")]
    InvalidKalman { q: f64, r: f64 },
    #[error("least-squares system is singular: every regressor in the window is zero")]
    Singular,
    #[error("observation {0} is not finite")]
    NonFinite(f64),
    #[error("need at least {min} bits, got {len}")]
    TooFewBits { len: usize, min: usize },
    #[error("schedule must end with exactly one unconditional rule and use strictly increasing bounds")]
    InvalidSchedule,
    #[error("cannot parse predictor `{0}` (expected simple_past, ar:ORDER[:WINDOW] or kalman:Q,R)")]
    Parse(String),
}

/// A predictor family and its parameters, without any fitted state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PredictorSpec {
    SimplePast,
    Ar { order: usize, window: usize },
    Kalman { q: f64, r: f64 },
}

impl PredictorSpec {
    /// AR(order) with the smallest admissible window, `2 * order + 1`.
    pub fn ar(order: usize) -> Result<Self, PredictError> {
        Self::ar_with_window(order, 2 * order + 1)
    }

    pub fn ar_with_window(order: usize, window: usize) -> Result<Self, PredictError> {
        if order == 0 || window < 2 * order + 1 {
            return Err(PredictError::InvalidAr { order, window });
        }
        Ok(PredictorSpec::Ar { order, window })
    }

    pub fn kalman(q: f64, r: f64) -> Result<Self, PredictError> {
        if !(q.is_finite() && r.is_finite() && q > 0.0 && r > 0.0) {
            return Err(PredictError::InvalidKalman { q, r });
        }
        Ok(PredictorSpec::Kalman { q, r })
    }

    pub fn validate(&self) -> Result<(), PredictError> {
        match *self {
            PredictorSpec::SimplePast => Ok(()),
            PredictorSpec::Ar { order, window } => Self::ar_with_window(order, window).map(|_| ()),
            PredictorSpec::Kalman { q, r } => Self::kalman(q, r).map(|_| ()),
        }
    }

    pub fn build(&self) -> Predictor {
        match *self {
            PredictorSpec::SimplePast => Predictor::SimplePast,
            PredictorSpec::Ar { order, window } => Predictor::Ar(ArModel { order, window, coefficients: Vec::new() }),
            PredictorSpec::Kalman { q, r } => Predictor::Kalman(KalmanFilter::new(q, r)),
        }
    }
}

impl fmt::Display for PredictorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PredictorSpec::SimplePast => write!(f, "simple_past"),
            PredictorSpec::Ar { order, window } if *window == 2 * order + 1 => write!(f, "ar:{order}"),
            PredictorSpec::Ar { order, window } => write!(f, "ar:{order}:{window}"),
            PredictorSpec::Kalman { q, r } => write!(f, "kalman:{q:?},{r:?}"),
        }
    }
}

impl FromStr for PredictorSpec {
    type Err = PredictError;

    /// `simple_past`, `ar:ORDER`, `ar:ORDER:WINDOW` or `kalman:Q,R`.
    fn from_str(s: &str) -> Result<Self, PredictError> {
        let bad = || PredictError::Parse(s.to_string());
        let (kind, args) = s.split_once(':').unwrap_or((s, ""));
        match kind {
            "simple_past" if args.is_empty() => Ok(PredictorSpec::SimplePast),
            "ar" => {
                let mut parts = args.split(':');
                let order: usize = parts.next().and_then(|o| o.parse().ok()).ok_or_else(bad)?;
                match parts.next() {
                    None => PredictorSpec::ar(order),
                    Some(w) => PredictorSpec::ar_with_window(order, w.parse().map_err(|_| bad())?),
                }
            }
            "kalman" => {
                let (q, r) = args.split_once(',').ok_or_else(bad)?;
                let q: f64 = q.trim().parse().map_err(|_| bad())?;
                let r: f64 = r.trim().parse().map_err(|_| bad())?;
                PredictorSpec::kalman(q, r)
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArModel {
    pub order: usize,
    pub window: usize,
    /// Coefficients `a_1 .. a_p` of the most recent fit; empty before the
    /// first fit.
    pub coefficients: Vec<f64>,
}

impl ArModel {
    /// Refits on the trailing window of `history`.
    pub fn refit(&self, history: &[f64]) -> Result<ArModel, PredictError> {
        Ok(ArModel { coefficients: fit_ar(history, self.order, self.window)?, ..self.clone() })
    }
}

/// Constant-velocity filter over `(position, velocity)` with unit time step.
/// Process noise `q` enters on the velocity only; `r` is the measurement
/// noise on the position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KalmanFilter {
    pub q: f64,
    pub r: f64,
    pub mean: [f64; 2],
    pub cov: [[f64; 2]; 2],
}

impl KalmanFilter {
    /// Diffuse prior: zero mean, variance 1000 on both components.
    pub fn new(q: f64, r: f64) -> Self {
        KalmanFilter { q, r, mean: [0.0, 0.0], cov: [[1000.0, 0.0], [0.0, 1000.0]] }
    }

    pub fn position(&self) -> f64 {
        self.mean[0]
    }

    pub fn velocity(&self) -> f64 {
        self.mean[1]
    }

    /// One predict step followed by a measurement update. The covariance is
    /// updated in Joseph form so it stays symmetric and positive.
    pub fn update(&self, observation: f64) -> Result<KalmanFilter, PredictError> {
        if !observation.is_finite() {
            return Err(PredictError::NonFinite(observation));
        }
        let [x, v] = self.mean;
        let [[p00, p01], [p10, p11]] = self.cov;
        // predict: F = [[1, 1], [0, 1]], Q = diag(0, q)
        let mx = x + v;
        let mv = v;
        let a00 = p00 + p01 + p10 + p11;
        let a01 = p01 + p11;
        let a11 = p11 + self.q;
        let a10 = a01;

        // update with H = [1, 0]
        let s = a00 + self.r;
        let k0 = a00 / s;
        let k1 = a10 / s;
        let innovation = observation - mx;
        let mean = [mx + k0 * innovation, mv + k1 * innovation];

        // (I - K H) P (I - K H)^T + K r K^T
        let (i00, i10) = (1.0 - k0, -k1);
        let b00 = i00 * a00;
        let b01 = i00 * a01;
        let b10 = i10 * a00 + a10;
        let b11 = i10 * a01 + a11;
        let c00 = b00 * i00 + self.r * k0 * k0;
        let c01 = b00 * i10 + b01 + self.r * k0 * k1;
        let c11 = b10 * i10 + b11 + self.r * k1 * k1;
        Ok(KalmanFilter { mean, cov: [[c00, c01], [c01, c11]], ..*self })
    }

    /// Position `horizon` steps after the filtered state.
    pub fn forecast(&self, horizon: u64) -> f64 {
        self.mean[0] + horizon as f64 * self.mean[1]
    }
}

pub fn kalman_update(state: &KalmanFilter, observation: f64) -> Result<KalmanFilter, PredictError> {
    state.update(observation)
}

/// A predictor together with its fitted state.
#[derive(Debug, Clone, PartialEq)]
pub enum Predictor {
    SimplePast,
    Ar(ArModel),
    Kalman(KalmanFilter),
}

fn check_history(history: &[f64]) -> Result<(), PredictError> {
    if history.is_empty() {
        return Err(PredictError::EmptyHistory);
    }
    match history.iter().find(|v| !v.is_finite()) {
        Some(&v) => Err(PredictError::NonFinite(v)),
        None => Ok(()),
    }
}

/// One-step-ahead prediction from `history` (oldest first). Never mutates
/// the predictor.
///
/// The Kalman variant filters `history` starting from the predictor's own
/// state, so pass a fresh filter with the whole history, or an already
/// filtered state with only the observations it has not seen.
pub fn predict_next(predictor: &Predictor, history: &[f64]) -> Result<f64, PredictError> {
    check_history(history)?;
    match predictor {
        Predictor::SimplePast => Ok(history[history.len() - 1]),
        Predictor::Ar(model) => {
            let coefficients = fit_ar(history, model.order, model.window)?;
            Ok(ar_forecast(&coefficients, history, 1))
        }
        Predictor::Kalman(filter) => {
            let filtered = history.iter().try_fold(*filter, |f, &obs| f.update(obs))?;
            Ok(filtered.forecast(1))
        }
    }
}

/// Iterates the AR recursion `horizon` steps past the end of `history`.
/// With `horizon == 0` this is the last observation.
pub fn ar_forecast(coefficients: &[f64], history: &[f64], horizon: u64) -> f64 {
    let order = coefficients.len();
    let mut recent: Vec<f64> = history[history.len().saturating_sub(order)..].to_vec();
    let mut last = history[history.len() - 1];
    for _ in 0..horizon {
        last = coefficients.iter().zip(recent.iter().rev()).map(|(a, y)| a * y).sum();
        recent.remove(0);
        recent.push(last);
    }
    last
}

/// Fits `y_t = a_1 y_(t-1) + ... + a_p y_(t-p)` over the trailing `window`
/// values of `history` by least squares with a ridge of [`AR_RIDGE`].
///
/// The ridge problem is solved as an ordinary least-squares problem on the
/// augmented system `[X; sqrt(ridge) I] a = [y; 0]` with Householder QR.
pub fn fit_ar(history: &[f64], order: usize, window: usize) -> Result<Vec<f64>, PredictError> {
    if order == 0 || window < 2 * order + 1 {
        return Err(PredictError::InvalidAr { order, window });
    }
    check_history(history)?;
    if history.len() < window {
        return Err(PredictError::ShortHistory { len: history.len(), window });
    }
    let w = &history[history.len() - window..];
    let rows = window - order;
    let ridge = AR_RIDGE.sqrt();

    // augmented design matrix, row-major, (rows + order) x order
    let mut a = vec![vec![0.0; order]; rows + order];
    let mut b = vec![0.0; rows + order];
    for (r, t) in (order..window).enumerate() {
        for j in 0..order {
            a[r][j] = w[t - 1 - j];
        }
        b[r] = w[t];
    }
    if a[..rows].iter().all(|row| row.iter().all(|&v| v == 0.0)) {
        return Err(PredictError::Singular);
    }
    for j in 0..order {
        a[rows + j][j] = ridge;
    }
    Ok(least_squares_qr(a, b))
}

/// Solves `min ||A x - b||` for a full-column-rank `A` (m x n, m >= n).
#[allow(clippy::needless_range_loop)]
fn least_squares_qr(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let m = a.len();
    let n = a[0].len();
    for k in 0..n {
        let norm = (k..m).map(|i| a[i][k] * a[i][k]).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..m).map(|i| a[i][k]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for j in k..n {
            let dot: f64 = (k..m).map(|i| v[i - k] * a[i][j]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in k..m {
                a[i][j] -= f * v[i - k];
            }
        }
        let dot: f64 = (k..m).map(|i| v[i - k] * b[i]).sum();
        let f = 2.0 * dot / vnorm2;
        for i in k..m {
            b[i] -= f * v[i - k];
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| a[k][j] * x[j]).sum();
        x[k] = (b[k] - s) / a[k][k];
    }
    x
}

/// Position-wise comparison of predicted and real inputs over the common
/// prefix: bit `i` is set iff `matches(predicted[i], real[i])`.
pub fn cis<T>(predicted: &[T], real: &[T], matches: impl Fn(&T, &T) -> bool) -> Vec<bool> {
    predicted.iter().zip(real).map(|(p, r)| matches(p, r)).collect()
}

pub fn cis_exact<T: PartialEq>(predicted: &[T], real: &[T]) -> Vec<bool> {
    cis(predicted, real, |p, r| p == r)
}

/// Real-valued variant: a hit is `|p - r| <= tolerance`.
pub fn cis_tolerance(predicted: &[f64], real: &[f64], tolerance: f64) -> Vec<bool> {
    cis(predicted, real, |p, r| (p - r).abs() <= tolerance)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomnessVerdict {
    Random,
    NonRandom,
}

impl fmt::Display for RandomnessVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RandomnessVerdict::Random => "random",
            RandomnessVerdict::NonRandom => "non_random",
        })
    }
}

/// Summary of an indicator sequence. The verdict comes from a compression
/// ratio, which only approximates algorithmic randomness.
#[derive(Debug, Clone, PartialEq)]
pub struct CisReport {
    pub bits: Vec<bool>,
    pub hit_rate: f64,
    pub compressed_ratio: f64,
    pub verdict: RandomnessVerdict,
}

impl CisReport {
    pub fn hits(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

impl fmt::Display for CisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "length={} hits={} hit_rate={:.6} ratio={:.6} verdict={} (proxy)",
            self.bits.len(),
            self.hits(),
            self.hit_rate,
            self.compressed_ratio,
            self.verdict
        )
    }
}

/// Packs bits most-significant-first, eight per byte, zero-padding the tail.
pub fn pack_bits(bits: &[bool]) -> Vec<u8> {
    bits.chunks(8)
        .map(|chunk| chunk.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | (u8::from(b) << (7 - i))))
        .collect()
}

/// Calls a bit sequence non-random when its packed form compresses below
/// `threshold` of its length.
pub fn randomness_proxy(bits: &[bool], compressor: &Compressor, threshold: f64) -> Result<CisReport, PredictError> {
    if bits.len() < MIN_PROXY_BITS {
        return Err(PredictError::TooFewBits { len: bits.len(), min: MIN_PROXY_BITS });
    }
    let packed = pack_bits(bits);
    let ratio = compressor.compressed_size(&packed) as f64 / packed.len() as f64;
    let hits = bits.iter().filter(|&&b| b).count();
    Ok(CisReport {
        bits: bits.to_vec(),
        hit_rate: hits as f64 / bits.len() as f64,
        compressed_ratio: ratio,
        verdict: if ratio < threshold { RandomnessVerdict::NonRandom } else { RandomnessVerdict::Random },
    })
}

/// One schedule entry: active while `tick < bound`, or always when `bound`
/// is `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub bound: Option<u64>,
    pub predictor: PredictorSpec,
}

/// Tick-guarded predictor selection; the first rule whose guard holds wins.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    rules: Vec<Rule>,
}

impl Schedule {
    /// Requires exactly one unconditional rule, placed last, and strictly
    /// increasing bounds before it.
    pub fn new(rules: Vec<Rule>) -> Result<Self, PredictError> {
        let Some((last, guarded)) = rules.split_last() else {
            return Err(PredictError::InvalidSchedule);
        };
        if last.bound.is_some() || guarded.iter().any(|r| r.bound.is_none()) {
            return Err(PredictError::InvalidSchedule);
        }
        let bounds: Vec<u64> = guarded.iter().filter_map(|r| r.bound).collect();
        if bounds.windows(2).any(|b| b[0] >= b[1]) {
            return Err(PredictError::InvalidSchedule);
        }
        for r in &rules {
            r.predictor.validate()?;
        }
        Ok(Schedule { rules })
    }

    /// A single unconditional rule.
    pub fn constant(predictor: PredictorSpec) -> Result<Self, PredictError> {
        Schedule::new(vec![Rule { bound: None, predictor }])
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn active(&self, tick: u64) -> usize {
        self.rules
            .iter()
            .position(|r| r.bound.is_none_or(|b| tick < b))
            .unwrap_or(self.rules.len() - 1)
    }

    fn max_window(&self) -> usize {
        self.rules
            .iter()
            .map(|r| match r.predictor {
                PredictorSpec::Ar { window, .. } => window,
                _ => 1,
            })
            .max()
            .unwrap_or(1)
    }
}

/// Streams observations through every predictor of a schedule, one per
/// tick, so a predictor is already warmed up when its rule becomes active.
#[derive(Debug, Clone)]
pub struct ScheduleRunner {
    schedule: Schedule,
    recent: VecDeque<f64>,
    capacity: usize,
    filters: Vec<Option<KalmanFilter>>,
}

impl ScheduleRunner {
    pub fn new(schedule: Schedule) -> Self {
        let filters = schedule
            .rules
            .iter()
            .map(|r| match r.predictor {
                PredictorSpec::Kalman { q, r } => Some(KalmanFilter::new(q, r)),
                _ => None,
            })
            .collect();
        let capacity = schedule.max_window();
        ScheduleRunner { schedule, recent: VecDeque::with_capacity(capacity), capacity, filters }
    }

    pub fn observe(&mut self, observation: f64) -> Result<(), PredictError> {
        if !observation.is_finite() {
            return Err(PredictError::NonFinite(observation));
        }
        if self.recent.len() == self.capacity {
            self.recent.pop_front();
        }
        self.recent.push_back(observation);
        for f in self.filters.iter_mut().flatten() {
            *f = f.update(observation)?;
        }
        Ok(())
    }

    /// Forecast of the value `horizon` steps after the latest observation,
    /// using the rule active at `tick`. AR rules fall back to the latest
    /// observation until the window is full, or if the fit is singular.
    pub fn forecast(&self, tick: u64, horizon: u64) -> Option<f64> {
        let last = *self.recent.back()?;
        let idx = self.schedule.active(tick);
        Some(match self.schedule.rules[idx].predictor {
            PredictorSpec::SimplePast => last,
            PredictorSpec::Ar { order, window } => {
                let history: Vec<f64> = self.recent.iter().copied().collect();
                match fit_ar(&history, order, window) {
                    Ok(coefficients) => ar_forecast(&coefficients, &history, horizon),
                    Err(_) => last,
                }
            }
            PredictorSpec::Kalman { .. } => {
                self.filters[idx].map_or(last, |f| if horizon == 0 { f.position() } else { f.forecast(horizon) })
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(n: usize) -> Vec<f64> {
        (1..=n).map(|v| v as f64).collect()
    }

    #[test]
    fn simple_past_is_the_last_value() {
        assert_eq!(predict_next(&Predictor::SimplePast, &[3.0, 7.0, 5.0]).unwrap(), 5.0);
        assert_eq!(predict_next(&Predictor::SimplePast, &[]), Err(PredictError::EmptyHistory));
    }

    #[test]
    fn ar_on_a_ramp() {
        let a = fit_ar(&ramp(10), 2, 8).unwrap();
        assert!((a[0] - 2.0).abs() < 1e-6 && (a[1] + 1.0).abs() < 1e-6, "{a:?}");
        let p = PredictorSpec::ar(2).unwrap().build();
        assert!((predict_next(&p, &ramp(10)).unwrap() - 11.0).abs() < 1e-6);
    }

    #[test]
    fn ar_on_a_constant() {
        // 1x1 normal equation: 64 a = 64 - ridge a  =>  a = 64 / (64 + 1e-9)
        let a = fit_ar(&[4.0; 5], 1, 5).unwrap();
        assert!((a[0] - 64.0 / (64.0 + 1e-9)).abs() < 1e-12);
        assert!((a[0] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn ar_errors() {
        assert_eq!(fit_ar(&ramp(4), 2, 5), Err(PredictError::ShortHistory { len: 4, window: 5 }));
        assert_eq!(fit_ar(&[0.0; 8], 2, 5), Err(PredictError::Singular));
        assert_eq!(fit_ar(&ramp(8), 2, 4), Err(PredictError::InvalidAr { order: 2, window: 4 }));
        assert_eq!(fit_ar(&ramp(8), 0, 4), Err(PredictError::InvalidAr { order: 0, window: 4 }));
        assert!(PredictorSpec::ar_with_window(2, 4).is_err());
    }

    #[test]
    fn ar_forecast_horizons() {
        let h = ramp(5);
        assert_eq!(ar_forecast(&[2.0, -1.0], &h, 0), 5.0);
        assert!((ar_forecast(&[2.0, -1.0], &h, 10) - 15.0).abs() < 1e-12);
    }

    #[test]
    fn kalman_first_update_trusts_the_measurement() {
        // prior P = F diag(1000,1000) F^T + Q = [[2000,1000],[1000,1000.01]],
        // gain 2000 / 2001
        let f = KalmanFilter::new(0.01, 1.0).update(10.0).unwrap();
        assert!((f.position() - 10.0 * 2000.0 / 2001.0).abs() < 1e-9);
        assert!((f.position() - 10.0).abs() < 0.02);
    }

    #[test]
    fn kalman_rejects_nan() {
        let f = KalmanFilter::new(0.01, 1.0);
        assert!(matches!(f.update(f64::NAN), Err(PredictError::NonFinite(v)) if v.is_nan()));
        assert!(matches!(kalman_update(&f, f64::INFINITY), Err(PredictError::NonFinite(_))));
    }

    #[test]
    fn kalman_parameters_are_validated() {
        assert!(PredictorSpec::kalman(0.0, 1.0).is_err());
        assert!(PredictorSpec::kalman(0.1, -1.0).is_err());
        assert!(PredictorSpec::kalman(0.1, 1.0).is_ok());
    }

    #[test]
    fn cis_examples() {
        assert_eq!(cis_exact(&[1, 2, 3], &[1, 5, 3]), vec![true, false, true]);
        assert_eq!(cis_exact(&[4, 4], &[4, 4]), vec![true, true]);
        assert!(cis_exact::<i32>(&[], &[1, 2]).is_empty());
        assert_eq!(cis_tolerance(&[1.0, 2.0], &[1.05, 2.5], 0.1), vec![true, false]);
        assert_eq!(cis_exact(&[1, 2, 3], &[1, 2]).len(), 2);
    }

    #[test]
    fn packing_is_msb_first() {
        assert_eq!(pack_bits(&[true, false, false, false, false, false, false, true]), vec![0x81]);
        assert_eq!(pack_bits(&[true]), vec![0x80]);
    }

    #[test]
    fn proxy_needs_enough_bits() {
        assert_eq!(
            randomness_proxy(&[true; 10], &Compressor::default(), 0.95),
            Err(PredictError::TooFewBits { len: 10, min: 64 })
        );
    }

    #[test]
    fn report_format() {
        let mut bits = vec![false; 64];
        bits[0] = true;
        let r = randomness_proxy(&bits, &Compressor::default(), 0.95).unwrap();
        let line = r.to_string();
        assert!(line.starts_with("length=64 hits=1 hit_rate=0.015625 ratio="), "{line}");
        assert!(line.ends_with("verdict=non_random (proxy)"), "{line}");
    }

    #[test]
    fn schedule_validation() {
        let sp = PredictorSpec::SimplePast;
        let rule = |bound, predictor| Rule { bound, predictor };
        assert!(Schedule::new(vec![]).is_err());
        assert!(Schedule::new(vec![rule(Some(5), sp)]).is_err());
        assert!(Schedule::new(vec![rule(None, sp), rule(None, sp)]).is_err());
        assert!(Schedule::new(vec![rule(Some(5), sp), rule(Some(5), sp), rule(None, sp)]).is_err());
        let s = Schedule::new(vec![rule(Some(5), sp), rule(Some(9), sp), rule(None, sp)]).unwrap();
        assert_eq!((s.active(0), s.active(5), s.active(8), s.active(9), s.active(1000)), (0, 1, 1, 2, 2));
    }

    #[test]
    fn predictor_spec_strings() {
        for text in ["simple_past", "ar:2", "ar:2:9", "kalman:0.01,1.0"] {
            let spec: PredictorSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        assert!("ar".parse::<PredictorSpec>().is_err());
        assert!("kalman:1".parse::<PredictorSpec>().is_err());
        assert!("magic".parse::<PredictorSpec>().is_err());
    }

    #[test]
    fn runner_switches_rules_and_warms_up() {
        let sched = Schedule::new(vec![
            Rule { bound: Some(3), predictor: PredictorSpec::SimplePast },
            Rule { bound: None, predictor: PredictorSpec::ar(1).unwrap() },
        ])
        .unwrap();
        let mut run = ScheduleRunner::new(sched);
        assert_eq!(run.forecast(0, 1), None);
        run.observe(1.0).unwrap();
        assert_eq!(run.forecast(0, 1), Some(1.0));
        // AR window (3) not full yet: falls back to the last value
        assert_eq!(run.forecast(10, 1), Some(1.0));
        run.observe(2.0).unwrap();
        run.observe(4.0).unwrap();
        let ar = run.forecast(10, 1).unwrap();
        // y_t = a y_(t-1) fitted on (1,2),(2,4): a = 10/5 = 2, minus ridge
        assert!((ar - 8.0).abs() < 1e-6, "{ar}");
        assert_eq!(run.forecast(2, 1), Some(4.0));
    }
}
