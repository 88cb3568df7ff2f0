//! CHSH and GHZ games: exhaustive classical strategies, exact quantum
//! protocols on a small state vector, and the order-robustness check for
//! deterministic thread protocols.

mod chsh;
mod ghz;
mod state;
mod thread;

use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};
use thiserror::Error;

pub use chsh::{chsh_classical_optimum, chsh_quantum, chsh_value, chsh_wins, ChshClassical, ChshQuantum, DEFAULT_ANGLES};
pub use ghz::{
    ghz_classical_exhaustive, ghz_outcome_distribution, ghz_protocol_search, ghz_quantum, ghz_success, ghz_wins,
    ghz_wins_count, in_promise, Basis, GhzClassical, GhzProtocol, GhzQuantum, GHZ_PROTOCOL, PROMISE_INPUTS,
};
pub use state::{check_unitary, hadamard, identity, rotation, y_to_standard, Operator, StateVector, TOLERANCE};
pub use thread::{
    family_sweep, lhv_bound_theorem_check, marginal_invariance_check, order_robustness_check, Discrepancy,
    FamilyMember, FamilySweep, Init, Instruction, LhvVerdict, MarginalBit, OrderReport, Outputs, Side, ThreadProtocol,
    Variable, FAMILY_SIZE, MAX_ASSIGNMENT_BITS, MAX_INSTRUCTION_INPUTS, MAX_VARIABLES,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GameError {
    #[error("a state of 1 to 3 qubits has 2, 4 or 8 amplitudes, got {0}")]
    BadDimension(usize),
    #[error("squared amplitudes sum to {0}, not 1")]
    NotNormalised(f64),
    #[error("operator is not unitary")]
    NotUnitary,
    #[error("qubit {qubit} out of range for {qubits} qubits")]
    NoSuchQubit { qubit: usize, qubits: usize },
    #[error("input {0:?} is outside the promise")]
    OutsidePromise([u8; 3]),
    #[error("bad protocol: {0}")]
    BadProtocol(String),
    #[error("instruction {instruction} touches both Alice's and Bob's variables; straddling events are not modelled")]
    Straddling { instruction: usize },
    #[error("{bits} assignment bits exceed the cap of {cap}")]
    TooManyBits { bits: usize, cap: usize },
    #[error("protocol has {count} discrepancies between schedules")]
    Discrepancies { count: u64 },
}

/// A deterministic response to one input bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Response {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "x")]
    Copy,
    #[serde(rename = "!x")]
    Flip,
}

impl Response {
    pub const ALL: [Response; 4] = [Response::Zero, Response::One, Response::Copy, Response::Flip];

    pub fn apply(self, x: bool) -> bool {
        match self {
            Response::Zero => false,
            Response::One => true,
            Response::Copy => x,
            Response::Flip => !x,
        }
    }

    /// From the outputs on inputs 0 and 1.
    pub fn from_table(t: [bool; 2]) -> Self {
        match t {
            [false, false] => Response::Zero,
            [true, true] => Response::One,
            [false, true] => Response::Copy,
            [true, false] => Response::Flip,
        }
    }
}

/// An exact probability, serialised as `{"exact": "p/q", "value": float}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Exact(pub Ratio<u64>);

impl Exact {
    pub fn to_f64(self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Exact", 2)?;
        st.serialize_field("exact", &self.to_string())?;
        st.serialize_field("value", &self.to_f64())?;
        st.end()
    }
}
