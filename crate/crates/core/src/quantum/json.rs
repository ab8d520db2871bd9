//! JSON forms: complex entries are `[re, im]` pairs, matrices are nested
//! row-major arrays.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Result};
use crate::linalg::{ComplexMatrix, C64};

use super::{Channel, DensityMatrix, Instrument, Povm};

type Rows = Vec<Vec<C64>>;

fn to_rows(m: &ComplexMatrix) -> Rows {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

fn square(rows: Rows, dim: usize, what: &str) -> Result<ComplexMatrix> {
    let m = ComplexMatrix::from_rows(rows)?;
    if m.rows() != dim || m.cols() != dim {
        return Err(invalid(format!("{what} must be {dim}x{dim}")));
    }
    Ok(m)
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        to_rows(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Rows::deserialize(d)?;
        ComplexMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct PovmRepr {
    dim: usize,
    outcomes: usize,
    effects: Vec<Rows>,
}

impl Serialize for Povm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PovmRepr {
            dim: self.dim(),
            outcomes: self.outcomes(),
            effects: self.effects().iter().map(to_rows).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Povm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PovmRepr::deserialize(d)?;
        povm_from_repr(repr).map_err(serde::de::Error::custom)
    }
}

fn povm_from_repr(repr: PovmRepr) -> Result<Povm> {
    if repr.effects.len() != repr.outcomes {
        return Err(invalid(format!(
            "declared {} outcomes but found {} effects",
            repr.outcomes,
            repr.effects.len()
        )));
    }
    let effects = repr
        .effects
        .into_iter()
        .map(|e| square(e, repr.dim, "effect"))
        .collect::<Result<Vec<_>>>()?;
    Povm::new(effects)
}

#[derive(Serialize, Deserialize)]
struct InstrumentRepr {
    dim: usize,
    outcomes: usize,
    branches: Vec<Rows>,
}

impl Serialize for Instrument {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        InstrumentRepr {
            dim: self.dim(),
            outcomes: self.outcomes(),
            branches: self.branches().iter().map(|b| to_rows(b.choi())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Instrument {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = InstrumentRepr::deserialize(d)?;
        instrument_from_repr(repr).map_err(serde::de::Error::custom)
    }
}

fn instrument_from_repr(repr: InstrumentRepr) -> Result<Instrument> {
    if repr.branches.len() != repr.outcomes {
        return Err(invalid("branch count does not match outcomes"));
    }
    let d = repr.dim;
    let branches = repr
        .branches
        .into_iter()
        .map(|b| Channel::from_choi(d, d, square(b, d * d, "Choi matrix")?))
        .collect::<Result<Vec<_>>>()?;
    Instrument::new(branches)
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    dim: usize,
    matrix: Rows,
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StateRepr {
            dim: self.dim(),
            matrix: to_rows(self.matrix()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = StateRepr::deserialize(d)?;
        square(repr.matrix, repr.dim, "density matrix")
            .and_then(DensityMatrix::new)
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{random, targets};
    use rand::SeedableRng;

    #[test]
    fn povm_round_trip() {
        let p = targets::qutrit_sic();
        let text = serde_json::to_string(&p).unwrap();
        let back: Povm = serde_json::from_str(&text).unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn instrument_and_state_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let inst = random::random_instrument(2, 3, &mut rng);
        let text = serde_json::to_string(&inst).unwrap();
        let back: Instrument = serde_json::from_str(&text).unwrap();
        assert_eq!(inst, back);
        let rho = random::random_density(3, &mut rng);
        let back: DensityMatrix =
            serde_json::from_str(&serde_json::to_string(&rho).unwrap()).unwrap();
        assert_eq!(rho, back);
    }

    #[test]
    fn rejects_invalid_povm() {
        let text = r#"{"dim":2,"outcomes":1,"effects":[[[[1,0],[0,0]],[[0,0],[0,0]]]]}"#;
        assert!(serde_json::from_str::<Povm>(text).is_err());
        let text = r#"{"dim":2,"outcomes":2,"effects":[[[[1,0],[0,0]],[[0,0],[1,0]]]]}"#;
        assert!(serde_json::from_str::<Povm>(text).is_err());
    }
}
