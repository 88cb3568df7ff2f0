use serde::Serialize;

use super::state::{hadamard, identity, y_to_standard, Operator, StateVector};
use super::{GameError, Response};

/// Inputs with `x_A xor x_B xor x_C = 0`.
pub const PROMISE_INPUTS: [[bool; 3]; 4] =
    [[false, false, false], [false, true, true], [true, false, true], [true, true, false]];

pub fn in_promise(x: [bool; 3]) -> bool {
    !(x[0] ^ x[1] ^ x[2])
}

/// `y_A xor y_B xor y_C = x_A or x_B or x_C`.
pub fn ghz_wins(x: [bool; 3], y: [bool; 3]) -> bool {
    (y[0] ^ y[1] ^ y[2]) == (x[0] | x[1] | x[2])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GhzClassical {
    /// Most promise inputs won by one deterministic triple.
    pub max_wins: usize,
    pub witnesses: Vec<[Response; 3]>,
}

pub fn ghz_wins_count(s: [Response; 3]) -> usize {
    PROMISE_INPUTS.iter().filter(|x| ghz_wins(**x, [0, 1, 2].map(|p| s[p].apply(x[p])))).count()
}

/// All 64 deterministic triples against the four promise inputs.
pub fn ghz_classical_exhaustive() -> GhzClassical {
    let triples: Vec<[Response; 3]> = Response::ALL
        .iter()
        .flat_map(|&a| Response::ALL.iter().flat_map(move |&b| Response::ALL.iter().map(move |&c| [a, b, c])))
        .collect();
    let max_wins = triples.iter().map(|&t| ghz_wins_count(t)).max().expect("64 triples");
    let witnesses = triples.into_iter().filter(|&t| ghz_wins_count(t) == max_wins).collect();
    GhzClassical { max_wins, witnesses }
}

/// Basis a party measures in, by rotating it to the standard basis first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    Standard,
    X,
    Y,
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::Standard, Basis::X, Basis::Y];

    pub fn operator(self) -> Operator {
        match self {
            Basis::Standard => identity(),
            Basis::X => hadamard(),
            Basis::Y => y_to_standard(),
        }
    }
}

/// Basis used on input 0 and on input 1, the same for every party.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GhzProtocol {
    pub on_input: [Basis; 2],
}

/// Found by [`ghz_protocol_search`] and kept fixed.
pub const GHZ_PROTOCOL: GhzProtocol = GhzProtocol { on_input: [Basis::Standard, Basis::X] };

/// Probability of each outcome triple (index `4 y_A + 2 y_B + y_C`).
pub fn ghz_outcome_distribution(p: GhzProtocol, x: [bool; 3]) -> Vec<f64> {
    let mut s = StateVector::ghz();
    for (q, &xi) in x.iter().enumerate() {
        s.apply(q, &p.on_input[usize::from(xi)].operator()).expect("basis changes are unitary");
    }
    s.probabilities()
}

pub fn ghz_success(p: GhzProtocol, x: [bool; 3]) -> Result<f64, GameError> {
    if !in_promise(x) {
        return Err(GameError::OutsidePromise(x.map(u8::from)));
    }
    let dist = ghz_outcome_distribution(p, x);
    Ok(dist.iter().enumerate().filter(|&(o, _)| ghz_wins(x, [o & 4 != 0, o & 2 != 0, o & 1 != 0])).map(|(_, p)| p).sum())
}

/// First protocol in the basis family that wins every promise input with
/// certainty.
pub fn ghz_protocol_search() -> Option<GhzProtocol> {
    Basis::ALL
        .iter()
        .flat_map(|&b0| Basis::ALL.iter().map(move |&b1| GhzProtocol { on_input: [b0, b1] }))
        .find(|&p| PROMISE_INPUTS.iter().all(|&x| (ghz_success(p, x).expect("promise input") - 1.0).abs() < 1e-9))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GhzQuantum {
    pub protocol: GhzProtocol,
    pub inputs: Vec<[u8; 3]>,
    pub success: Vec<f64>,
}

/// Success of the fixed protocol on each promise input.
pub fn ghz_quantum() -> GhzQuantum {
    GhzQuantum {
        protocol: GHZ_PROTOCOL,
        inputs: PROMISE_INPUTS.iter().map(|x| x.map(u8::from)).collect(),
        success: PROMISE_INPUTS.iter().map(|&x| ghz_success(GHZ_PROTOCOL, x).expect("promise input")).collect(),
    }
}
