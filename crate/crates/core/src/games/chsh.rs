use num_rational::Ratio;
use serde::Serialize;

use super::state::{rotation, StateVector};
use super::{Exact, Response};

/// `y_A xor y_B = x_A and x_B`.
pub fn chsh_wins(x: [bool; 2], y: [bool; 2]) -> bool {
    (y[0] ^ y[1]) == (x[0] & x[1])
}

/// Exact success of a deterministic pair over the four uniform inputs.
pub fn chsh_value(a: Response, b: Response) -> Ratio<u64> {
    let wins = (0..4).filter(|&i| {
        let x = [i & 2 != 0, i & 1 != 0];
        chsh_wins(x, [a.apply(x[0]), b.apply(x[1])])
    });
    Ratio::new(wins.count() as u64, 4)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChshClassical {
    pub value: Exact,
    pub maximizers: Vec<(Response, Response)>,
}

/// Best deterministic pair, found by trying all 16. Shared randomness
/// averages deterministic pairs, so it cannot do better.
pub fn chsh_classical_optimum() -> ChshClassical {
    let pairs: Vec<(Response, Response)> =
        Response::ALL.iter().flat_map(|&a| Response::ALL.iter().map(move |&b| (a, b))).collect();
    let value = pairs.iter().map(|&(a, b)| chsh_value(a, b)).max().expect("16 pairs");
    let maximizers = pairs.into_iter().filter(|&(a, b)| chsh_value(a, b) == value).collect();
    ChshClassical { value: Exact(value), maximizers }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChshQuantum {
    pub angles: [f64; 2],
    /// Win probability for inputs `(0,0), (0,1), (1,0), (1,1)`.
    pub per_input: [f64; 4],
    pub success: f64,
}

pub const DEFAULT_ANGLES: [f64; 2] = [std::f64::consts::FRAC_PI_8, -std::f64::consts::FRAC_PI_8];

/// Shared Bell pair; a party with input 1 rotates its qubit by its angle,
/// then both measure in the standard basis.
pub fn chsh_quantum(angle_a1: f64, angle_b1: f64) -> ChshQuantum {
    let mut per_input = [0.0; 4];
    for (i, slot) in per_input.iter_mut().enumerate() {
        let x = [i & 2 != 0, i & 1 != 0];
        let mut s = StateVector::bell();
        for (q, (&xi, angle)) in x.iter().zip([angle_a1, angle_b1]).enumerate() {
            if xi {
                s.apply(q, &rotation(angle)).expect("rotations are unitary");
            }
        }
        *slot = s
            .probabilities()
            .iter()
            .enumerate()
            .filter(|&(o, _)| chsh_wins(x, [o & 2 != 0, o & 1 != 0]))
            .map(|(_, p)| p)
            .sum();
    }
    ChshQuantum { angles: [angle_a1, angle_b1], per_input, success: per_input.iter().sum::<f64>() / 4.0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_8;

    #[test]
    fn classical() {
        let c = chsh_classical_optimum();
        assert_eq!(c.value, Exact(Ratio::new(3, 4)));
        assert_eq!(c.value.to_string(), "3/4");
        assert!(c.maximizers.contains(&(Response::Zero, Response::Zero)));
        assert_eq!(c.maximizers.len(), 8);
        // y_A xor y_B = x_A xor x_B, which matches x_A and x_B only on (0, 0)
        assert_eq!(chsh_value(Response::Copy, Response::Copy), Ratio::new(1, 4));
    }

    #[test]
    fn quantum() {
        let q = chsh_quantum(DEFAULT_ANGLES[0], DEFAULT_ANGLES[1]);
        let c2 = FRAC_PI_8.cos().powi(2);
        for (got, want) in q.per_input.iter().zip([1.0, c2, c2, 0.5]) {
            assert!((got - want).abs() < 1e-9);
        }
        assert!((q.success - (5.0 + 2f64.sqrt()) / 8.0).abs() < 1e-9);
        assert!((chsh_quantum(0.0, 0.0).success - 0.75).abs() < 1e-9);
    }
}
