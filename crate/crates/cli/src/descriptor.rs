//! State descriptors on the command line:
//! `plus_plus`, `bell_phi_plus`, `bell_phi_minus`, `maximally_mixed`, or
//! `product:x,y,z;x,y,z` with one Bloch vector per qubit.

use contextuality::optics::ProbeState;
use contextuality::state::kets;
use contextuality::StateDescriptor;

use crate::error::{CliError, CliResult};

pub const DEFAULT_STATE: &str = "plus_plus";

fn bloch_vector(text: &str, whole: &str) -> CliResult<[f64; 3]> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || {
        CliError::usage(format!(
            "'{whole}': expected three comma-separated numbers, got '{text}'"
        ))
    };
    if parts.len() != 3 {
        return Err(bad());
    }
    let mut v = [0.0f64; 3];
    for (slot, part) in v.iter_mut().zip(parts) {
        *slot = part.parse().map_err(|_| bad())?;
        if !slot.is_finite() {
            return Err(bad());
        }
    }
    Ok(v)
}

fn product_vectors(rest: &str, whole: &str) -> CliResult<([f64; 3], [f64; 3])> {
    let (a, b) = rest.split_once(';').ok_or_else(|| {
        CliError::usage(format!(
            "'{whole}': product states need two Bloch vectors separated by ';'"
        ))
    })?;
    Ok((bloch_vector(a, whole)?, bloch_vector(b, whole)?))
}

pub fn parse_state(text: &str) -> CliResult<StateDescriptor<f64>> {
    match text.trim() {
        "plus_plus" => Ok(StateDescriptor::PlusPlus),
        "bell_phi_plus" => Ok(StateDescriptor::BellPhiPlus),
        "bell_phi_minus" => Ok(StateDescriptor::BellPhiMinus),
        "maximally_mixed" => Ok(StateDescriptor::MaximallyMixed),
        other => match other.strip_prefix("product:") {
            Some(rest) => {
                let (a, b) = product_vectors(rest, other)?;
                Ok(StateDescriptor::Product(a, b))
            }
            None => Err(CliError::usage(format!(
                "unknown state '{other}'; expected plus_plus, bell_phi_plus, bell_phi_minus, \
                 maximally_mixed or product:x,y,z;x,y,z"
            ))),
        },
    }
}

/// Optical sources emit product states of pure polarizations only.
pub fn parse_probe(text: &str) -> CliResult<ProbeState<f64>> {
    let text = text.trim();
    if text == "plus_plus" {
        return Ok(ProbeState::plus_plus());
    }
    let Some(rest) = text.strip_prefix("product:") else {
        return Err(CliError::usage(format!(
            "optics source '{text}' must be plus_plus or product:x,y,z;x,y,z with unit Bloch vectors"
        )));
    };
    let (a, b) = product_vectors(rest, text)?;
    Ok(ProbeState::new(kets::from_bloch(a)?, kets::from_bloch(b)?))
}
