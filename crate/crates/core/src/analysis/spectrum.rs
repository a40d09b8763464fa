use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::solvers::DiscreteGenerator;

/// Largest matrix handled by the dense eigensolver.
pub const MAX_SPECTRUM_DIM: usize = 2000;

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Largest real part.
    pub abscissa: f64,
    /// Sorted by descending real part, then descending imaginary part.
    pub eigenvalues: Vec<Complex<f64>>,
}

pub fn spectral_abscissa(gen: &DiscreteGenerator) -> Result<Spectrum> {
    let n = gen.dim();
    if n > MAX_SPECTRUM_DIM {
        return Err(Error::Precondition(format!(
            "generator dimension {n} exceeds {MAX_SPECTRUM_DIM}"
        )));
    }
    let schur = nalgebra::linalg::Schur::try_new(gen.matrix.clone(), f64::EPSILON, 10_000 * n)
        .ok_or_else(|| Error::numerical("eigensolver did not converge"))?;
    let mut eigenvalues: Vec<Complex<f64>> = schur.complex_eigenvalues().iter().copied().collect();
    if eigenvalues.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::numerical("non-finite eigenvalue"));
    }
    eigenvalues.sort_by(|x, y| y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im)));
    let abscissa = eigenvalues.first().map_or(f64::NEG_INFINITY, |z| z.re);
    Ok(Spectrum {
        abscissa,
        eigenvalues,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::robin_root;
    use crate::grid::SpatialGrid;
    use crate::solvers::{assemble_discrete_generator, assemble_layer_generator};
    use crate::state::Parameters;

    #[test]
    fn uncoupled_blocks() {
        let g = SpatialGrid::new(30).unwrap();
        let p = Parameters {
            a: 0.0,
            b: 0.0,
            d: 0.0,
            epsilon: 1.0,
            ..Parameters::default_admissible()
        };
        let s = spectral_abscissa(&assemble_discrete_generator(&p, &g)).unwrap();
        let mut real = 0;
        for z in &s.eigenvalues {
            if z.im.abs() > 1e-6 {
                // wave: purely imaginary
                assert!(z.re.abs() < 1e-8 * z.norm().max(1.0), "{z}");
            } else {
                assert!(z.re < 0.0, "{z}");
                real += 1;
            }
        }
        assert_eq!(real, 31);
        // slowest wave mode: (π/2) i, second-order accurate
        let slow = s
            .eigenvalues
            .iter()
            .filter(|z| z.im > 0.0)
            .map(|z| z.im)
            .fold(f64::INFINITY, f64::min);
        assert!((slow - std::f64::consts::FRAC_PI_2).abs() < 1e-3);
    }

    #[test]
    fn layer_slowest_eigenvalue() {
        let g = SpatialGrid::new(100).unwrap();
        let s = spectral_abscissa(&assemble_layer_generator(4.0, &g)).unwrap();
        let k = robin_root(4.0).unwrap();
        assert!((s.abscissa / (-k * k) - 1.0).abs() < 0.02);
        assert!((s.abscissa + 1.599).abs() < 0.01);
    }

    #[test]
    fn admissible_generator_is_stable() {
        let g = SpatialGrid::new(40).unwrap();
        let s = spectral_abscissa(&assemble_discrete_generator(
            &Parameters::default_admissible(),
            &g,
        ))
        .unwrap();
        assert!(s.abscissa < 0.0);
        assert_eq!(s.eigenvalues.len(), 121);
        assert!(s.eigenvalues.windows(2).all(|w| w[0].re >= w[1].re));
    }
}
