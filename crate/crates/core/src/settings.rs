use serde::Serialize;

pub const DEFAULT_SEED: u64 = 0x5eed_2024;
pub const DEFAULT_EPS: f64 = 1e-9;
pub const DEFAULT_VERTEX_CAP: usize = 4096;
pub const DEFAULT_STATE_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Approx,
}

/// Knobs shared by every computation: tolerance, RNG seed, size caps and arithmetic mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Settings {
    pub eps: f64,
    pub seed: u64,
    pub vertex_cap: usize,
    pub state_cap: u128,
    pub mode: Mode,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            eps: DEFAULT_EPS,
            seed: DEFAULT_SEED,
            vertex_cap: DEFAULT_VERTEX_CAP,
            state_cap: DEFAULT_STATE_CAP,
            mode: Mode::Exact,
        }
    }
}
