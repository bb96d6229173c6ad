use thiserror::Error;

/// Errors reported by the shock, traveling-wave and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular point: {0}")]
    Pole(String),

    #[error("no undercompressive locus for gamma ≥ sqrt(3/8) (gamma = {gamma})")]
    NoLocus { gamma: f64 },

    #[error("{name} = {value} outside admissible range {range}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        range: String,
    },

    #[error("u_plus = {u_plus} is not connected to any left state (admissible range [{lower}, {upper}])")]
    NoConnection { u_plus: f64, lower: f64, upper: f64 },

    #[error("wave speed s = {0} is not positive; traveling-wave system degenerates")]
    DegenerateSpeed(f64),

    #[error("equilibrium u = {0} is not a saddle")]
    NotSaddle(f64),

    #[error("zero pivot in tridiagonal solve at row {0}")]
    SolverBreakdown(usize),

    #[error("invalid configuration: {}", .0.join("; "))]
    InvalidConfig(Vec<String>),
}

pub type Result<T> = std::result::Result<T, Error>;
