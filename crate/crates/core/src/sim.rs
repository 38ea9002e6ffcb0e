//! Delayed-perception pursuit game.
//!
//! A ball moves on a `field_x` by `field_y` grid. Player P guards column 0
//! and player Q guards column `field_x - 1`; each only moves vertically, one
//! cell per tick, toward where it believes the ball is. A player with delay
//! `d` sees the ball's y from `d` ticks ago. Intuitive players forecast the
//! present from that delayed stream instead of chasing the stale value.
//!
//! Tick order: ball moves, players perceive, players act, scoring.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::predict::{PredictError, Schedule, ScheduleRunner};

pub const DEFAULT_FIELD_X: i32 = 80;
pub const DEFAULT_FIELD_Y: i32 = 24;
pub const DEFAULT_LIFESPAN: u64 = 1000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("field must be at least 2x2, got {0}x{1}")]
    FieldTooSmall(i32, i32),
    #[error("delay {delay} must be smaller than the lifespan {lifespan}")]
    DelayTooLong { delay: u64, lifespan: u64 },
    #[error("smooth_bounce velocity ({vx}, {vy}) must be smaller than the field in each axis")]
    VelocityTooLarge { vx: i32, vy: i32 },
    #[error("sweep needs at least one delay and one seed")]
    EmptySweep,
    #[error(transparent)]
    Predict(#[from] PredictError),
}

/// SplitMix64.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform over {-1, 0, 1}: `floor(3 * next / 2^64) - 1`.
    pub fn step(&mut self) -> i32 {
        ((u128::from(self.next_u64()) * 3) >> 64) as i32 - 1
    }

    /// Uniform over `0..n` by the same multiply-shift mapping.
    pub fn below(&mut self, n: u32) -> i32 {
        ((u128::from(self.next_u64()) * u128::from(n)) >> 64) as i32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Motion {
    RandomWalk,
    SmoothBounce { vx: i32, vy: i32 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    Reactive,
    Intuitive(Schedule),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub x: i32,
    pub y: i32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameConfig {
    pub field_x: i32,
    pub field_y: i32,
    pub lifespan: u64,
    pub delay_p: u64,
    pub delay_q: u64,
    pub motion: Motion,
    pub strategy_p: Strategy,
    pub strategy_q: Strategy,
    pub seed: u64,
    /// Record one [`TickRecord`] per tick.
    pub record_trace: bool,
}

impl Default for GameConfig {
    fn default() -> Self {
        GameConfig {
            field_x: DEFAULT_FIELD_X,
            field_y: DEFAULT_FIELD_Y,
            lifespan: DEFAULT_LIFESPAN,
            delay_p: 0,
            delay_q: 0,
            motion: Motion::RandomWalk,
            strategy_p: Strategy::Reactive,
            strategy_q: Strategy::Reactive,
            seed: 0,
            record_trace: false,
        }
    }
}

impl GameConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if self.field_x < 2 || self.field_y < 2 {
            return Err(SimError::FieldTooSmall(self.field_x, self.field_y));
        }
        // an empty game has nothing to delay
        if self.lifespan > 0 {
            for delay in [self.delay_p, self.delay_q] {
                if delay >= self.lifespan {
                    return Err(SimError::DelayTooLong { delay, lifespan: self.lifespan });
                }
            }
        }
        if let Motion::SmoothBounce { vx, vy } = self.motion {
            if vx.abs() >= self.field_x || vy.abs() >= self.field_y {
                return Err(SimError::VelocityTooLarge { vx, vy });
            }
        }
        Ok(())
    }

    /// Where the ball is before the first tick: the field center for a
    /// random walk, a seed-derived cell for smooth bounce.
    pub fn initial_ball(&self) -> Position {
        match self.motion {
            Motion::RandomWalk => Position { x: self.field_x / 2, y: self.field_y / 2 },
            Motion::SmoothBounce { .. } => {
                let mut rng = Rng::new(self.seed ^ 0x5bd1_e995_0000_0000);
                let x = rng.below(self.field_x as u32);
                let y = rng.below(self.field_y as u32);
                Position { x, y }
            }
        }
    }
}

/// Ball state carried between ticks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ball {
    pub pos: Position,
    pub motion: Motion,
}

fn reflect(p: i32, v: i32, size: i32) -> (i32, i32) {
    let next = p + v;
    if next < 0 {
        (-next, -v)
    } else if next > size - 1 {
        (2 * (size - 1) - next, -v)
    } else {
        (next, v)
    }
}

/// Advances the ball one tick. Random walks draw `dx` then `dy` from `rng`
/// and drop each axis update that would leave the field; smooth bounce
/// reflects off the walls and flips the velocity component.
pub fn ball_step(ball: Ball, rng: &mut Rng, field_x: i32, field_y: i32) -> Ball {
    let Position { x, y } = ball.pos;
    match ball.motion {
        Motion::RandomWalk => {
            let dx = rng.step();
            let dy = rng.step();
            let x = if (0..field_x).contains(&(x + dx)) { x + dx } else { x };
            let y = if (0..field_y).contains(&(y + dy)) { y + dy } else { y };
            Ball { pos: Position { x, y }, ..ball }
        }
        Motion::SmoothBounce { vx, vy } => {
            let (x, vx) = reflect(x, vx, field_x);
            let (y, vy) = reflect(y, vy, field_y);
            Ball { pos: Position { x, y }, motion: Motion::SmoothBounce { vx, vy } }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TickRecord {
    pub tick: u64,
    pub ball_x: i32,
    pub ball_y: i32,
    pub p_y: i32,
    pub p_seen: i32,
    pub p_pred: i32,
    pub q_y: i32,
    pub q_seen: i32,
    pub q_pred: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GameResult {
    pub points_p: u64,
    pub points_q: u64,
    pub trace: Option<Vec<TickRecord>>,
}

impl GameResult {
    pub fn combined(&self) -> u64 {
        self.points_p + self.points_q
    }
}

/// Maps a real forecast onto a row index. Out-of-field forecasts are folded
/// back the way the ball would bounce, then rounded.
pub fn forecast_to_row(value: f64, field_y: i32) -> i32 {
    let top = f64::from(field_y - 1);
    if !value.is_finite() {
        return (field_y - 1) / 2;
    }
    let period = 2.0 * top;
    let mut v = value.rem_euclid(period);
    if v > top {
        v = period - v;
    }
    (v.round() as i32).clamp(0, field_y - 1)
}

struct Player {
    y: i32,
    delay: u64,
    runner: Option<ScheduleRunner>,
}

impl Player {
    fn new(field_y: i32, delay: u64, strategy: &Strategy) -> Self {
        let runner = match strategy {
            Strategy::Reactive => None,
            Strategy::Intuitive(schedule) => Some(ScheduleRunner::new(schedule.clone())),
        };
        Player { y: field_y / 2, delay, runner }
    }

    /// Returns `(seen, target)`.
    fn act(&mut self, tick: u64, seen: i32, field_y: i32) -> Result<(i32, i32), SimError> {
        let target = match &mut self.runner {
            None => seen,
            Some(runner) => {
                runner.observe(f64::from(seen))?;
                let forecast = runner.forecast(tick, self.delay).unwrap_or(f64::from(seen));
                forecast_to_row(forecast, field_y)
            }
        };
        if self.y < target {
            self.y += 1;
        } else if self.y > target {
            self.y -= 1;
        }
        Ok((seen, target))
    }
}

/// Plays one game. A pure function of `config`.
pub fn run_game(config: &GameConfig) -> Result<GameResult, SimError> {
    config.validate()?;
    let mut rng = Rng::new(config.seed);
    let mut ball = Ball { pos: config.initial_ball(), motion: config.motion };
    let mut p = Player::new(config.field_y, config.delay_p, &config.strategy_p);
    let mut q = Player::new(config.field_y, config.delay_q, &config.strategy_q);
    let max_delay = config.delay_p.max(config.delay_q) as usize;
    let mut history: VecDeque<i32> = VecDeque::with_capacity(max_delay + 1);
    let unseen = config.field_y / 2;
    let mut result = GameResult {
        trace: config.record_trace.then(|| Vec::with_capacity(config.lifespan.min(1 << 24) as usize)),
        ..GameResult::default()
    };

    for tick in 0..config.lifespan {
        ball = ball_step(ball, &mut rng, config.field_x, config.field_y);
        if history.len() == max_delay + 1 {
            history.pop_front();
        }
        history.push_back(ball.pos.y);

        // history.back() is tick t, so tick t - d sits d places before it
        let perceive = |delay: u64| -> i32 {
            if tick >= delay {
                history[history.len() - 1 - delay as usize]
            } else {
                unseen
            }
        };
        let (p_seen, p_pred) = p.act(tick, perceive(p.delay), config.field_y)?;
        let (q_seen, q_pred) = q.act(tick, perceive(q.delay), config.field_y)?;

        if ball.pos.x == 0 && p.y == ball.pos.y {
            result.points_p += 1;
        }
        if ball.pos.x == config.field_x - 1 && q.y == ball.pos.y {
            result.points_q += 1;
        }
        if let Some(trace) = &mut result.trace {
            trace.push(TickRecord {
                tick,
                ball_x: ball.pos.x,
                ball_y: ball.pos.y,
                p_y: p.y,
                p_seen,
                p_pred,
                q_y: q.y,
                q_seen,
                q_pred,
            });
        }
    }
    Ok(result)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub delay: u64,
    pub mean_score: f64,
    pub seeds_used: usize,
}

/// Runs every (delay, seed) pair with both delays set to `delay` and
/// averages the combined score per delay. Games run in parallel; rows come
/// back in the order of `delays`.
pub fn sweep(base: &GameConfig, delays: &[u64], seeds: &[u64]) -> Result<Vec<SweepRow>, SimError> {
    if delays.is_empty() || seeds.is_empty() {
        return Err(SimError::EmptySweep);
    }
    let jobs: Vec<(u64, u64)> = delays.iter().flat_map(|&d| seeds.iter().map(move |&s| (d, s))).collect();
    let scores: Vec<u64> = jobs
        .par_iter()
        .map(|&(delay, seed)| {
            let config = GameConfig { delay_p: delay, delay_q: delay, seed, record_trace: false, ..base.clone() };
            run_game(&config).map(|r| r.combined())
        })
        .collect::<Result<_, _>>()?;
    Ok(delays
        .iter()
        .zip(scores.chunks(seeds.len()))
        .map(|(&delay, chunk)| SweepRow {
            delay,
            mean_score: chunk.iter().sum::<u64>() as f64 / seeds.len() as f64,
            seeds_used: seeds.len(),
        })
        .collect())
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("delay,mean_score,seeds\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{}", r.delay, r.mean_score, r.seeds_used);
    }
    out
}

pub fn trace_csv(trace: &[TickRecord]) -> String {
    let mut out = String::from("tick,ball_x,ball_y,p_y,p_seen,p_pred,q_y,q_seen,q_pred\n");
    for t in trace {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            t.tick, t.ball_x, t.ball_y, t.p_y, t.p_seen, t.p_pred, t.q_y, t.q_seen, t.q_pred
        );
    }
    out
}
