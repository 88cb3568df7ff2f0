use num_complex::Complex64;

use super::GameError;

/// Tolerance for normalisation and unitarity checks.
pub const TOLERANCE: f64 = 1e-9;

pub type Operator = [[Complex64; 2]; 2];

/// Amplitudes of 1 to 3 qubits. Qubit 0 is the leftmost bit of a basis
/// label, so `|011>` is index 3.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self, GameError> {
        let qubits = match amplitudes.len() {
            2 => 1,
            4 => 2,
            8 => 3,
            n => return Err(GameError::BadDimension(n)),
        };
        let norm: f64 = amplitudes.iter().map(Complex64::norm_sqr).sum();
        if (norm - 1.0).abs() > TOLERANCE {
            return Err(GameError::NotNormalised(norm));
        }
        Ok(StateVector { qubits, amplitudes })
    }

    /// `(|00> + |11>) / sqrt 2`.
    pub fn bell() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let z = Complex64::new(0.0, 0.0);
        StateVector::new(vec![h, z, z, h]).expect("normalised")
    }

    /// `(|011> + |101> + |110> - |000>) / 2`.
    pub fn ghz() -> Self {
        let mut a = vec![Complex64::new(0.0, 0.0); 8];
        a[0] = Complex64::new(-0.5, 0.0);
        for i in [3, 5, 6] {
            a[i] = Complex64::new(0.5, 0.0);
        }
        StateVector::new(a).expect("normalised")
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Applies `u` to one qubit after checking that its columns are
    /// orthonormal.
    pub fn apply(&mut self, qubit: usize, u: &Operator) -> Result<(), GameError> {
        if qubit >= self.qubits {
            return Err(GameError::NoSuchQubit { qubit, qubits: self.qubits });
        }
        check_unitary(u)?;
        let bit = 1 << (self.qubits - 1 - qubit);
        for i in (0..self.amplitudes.len()).filter(|i| i & bit == 0) {
            let (a0, a1) = (self.amplitudes[i], self.amplitudes[i | bit]);
            self.amplitudes[i] = u[0][0] * a0 + u[0][1] * a1;
            self.amplitudes[i | bit] = u[1][0] * a0 + u[1][1] * a1;
        }
        Ok(())
    }

    /// Probability of each standard-basis outcome.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(Complex64::norm_sqr).collect()
    }
}

pub fn check_unitary(u: &Operator) -> Result<(), GameError> {
    for i in 0..2 {
        for j in 0..2 {
            let dot: Complex64 = (0..2).map(|k| u[k][i].conj() * u[k][j]).sum();
            let want = if i == j { 1.0 } else { 0.0 };
            if (dot - want).norm() > TOLERANCE {
                return Err(GameError::NotUnitary);
            }
        }
    }
    Ok(())
}

/// Real rotation by `theta`.
pub fn rotation(theta: f64) -> Operator {
    let (s, c) = theta.sin_cos();
    [[c.into(), (-s).into()], [s.into(), c.into()]]
}

pub fn identity() -> Operator {
    rotation(0.0)
}

pub fn hadamard() -> Operator {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

/// `H S^dagger`: takes the Y eigenbasis to the standard basis.
pub fn y_to_standard() -> Operator {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [[Complex64::new(h, 0.0), Complex64::new(0.0, -h)], [Complex64::new(h, 0.0), Complex64::new(0.0, h)]]
}
