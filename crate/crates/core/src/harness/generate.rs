use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{band_key, scalar_field, InstanceConfig, MatrixSource, NuSource};
use super::HarnessError;
use crate::algebra::{format_scalar, Scalar};
use crate::banded::BandedHessenberg;
use crate::factorization::{FactorError, ShiftedInstance};
use crate::functionals::{build_nu, dual_sequence, LambdaLadder, LinearFunctional, OrthogonalityVector};

/// Retries of `C -> C + 1` allowed for random matrices.
pub const SHIFT_RETRY_CAP: usize = 32;

#[derive(Clone, Debug)]
pub struct Generated {
    pub instance: ShiftedInstance,
    pub ladder: LambdaLadder,
    pub nu: OrthogonalityVector,
    pub duals: Vec<LinearFunctional>,
    pub shift_retries: usize,
}

fn draw(rng: &mut ChaCha8Rng, bound: i64, nonzero: bool) -> Scalar {
    loop {
        let num = rng.gen_range(-bound..=bound);
        let den = rng.gen_range(1..=bound);
        if !nonzero || num != 0 {
            return Scalar::new(num.into(), den.into());
        }
    }
}

fn build_matrix(config: &InstanceConfig, rng: &mut ChaCha8Rng) -> Result<BandedHessenberg, HarnessError> {
    let (p, n) = (config.p, config.n);
    let matrix = match &config.matrix {
        MatrixSource::Explicit { bands } => {
            let parsed = (0..=p)
                .map(|d| {
                    let key = band_key(d);
                    bands
                        .get(&key)
                        .ok_or_else(|| HarnessError::Config(format!("missing band \"{key}\"")))?
                        .iter()
                        .map(|v| scalar_field(&format!("band \"{key}\""), v))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            BandedHessenberg::from_bands(p, n, parsed)
        }
        MatrixSource::Random { bound } => {
            BandedHessenberg::from_recurrence(p, n, |row, col| draw(rng, *bound, row - col == p))
        }
    };
    matrix.map_err(|e| HarnessError::Config(e.to_string()))
}

fn build_ladder(config: &InstanceConfig, rng: &mut ChaCha8Rng) -> Result<LambdaLadder, HarnessError> {
    let rows = match &config.nu {
        NuSource::Canonical => return Ok(LambdaLadder::identity(config.p)),
        NuSource::Ladder { lambda } => lambda
            .iter()
            .map(|row| row.iter().map(|v| scalar_field("lambda", v)).collect())
            .collect::<Result<Vec<_>, _>>()?,
        NuSource::Random { bound } => (1..=config.p)
            .map(|i| (0..i).map(|_| draw(rng, *bound, true)).collect())
            .collect(),
    };
    Ok(LambdaLadder::new(0, rows)?)
}

/// Instance, shift and orthogonality vector described by `config`.
///
/// Draws come from one ChaCha8 stream seeded with `config.seed`: matrix
/// entries row by row, then the ladder. For random matrices a shift with
/// `P_n(C) = 0` is replaced by `C + 1`, up to [`SHIFT_RETRY_CAP`] times.
pub fn generate(config: &InstanceConfig) -> Result<Generated, HarnessError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let matrix = build_matrix(config, &mut rng)?;
    let ladder = build_ladder(config, &mut rng)?;

    let retry = matches!(config.matrix, MatrixSource::Random { .. });
    let mut shift = config.shift_value()?;
    let mut retries = 0;
    let instance = loop {
        match ShiftedInstance::new(matrix.clone(), shift.clone()) {
            Ok(inst) => break inst,
            Err(FactorError::SingularLeadingMinor(k)) if retry => {
                if retries == SHIFT_RETRY_CAP {
                    return Err(HarnessError::GenerationExhausted {
                        attempts: retries + 1,
                        last: format_scalar(&shift),
                    });
                }
                let next = &shift + Scalar::from_integer(1.into());
                log::warn!(
                    "P_{k}({}) = 0, retrying with C = {}",
                    format_scalar(&shift),
                    format_scalar(&next)
                );
                shift = next;
                retries += 1;
            }
            Err(e) => return Err(e.into()),
        }
    };

    let duals = dual_sequence(instance.polys())?;
    let nu = match config.nu {
        NuSource::Canonical => OrthogonalityVector::canonical(&duals, config.p)?,
        _ => build_nu(&ladder, &duals)?,
    };
    Ok(Generated {
        instance,
        ladder,
        nu,
        duals,
        shift_retries: retries,
    })
}
