//! Information content of a viable set, in mers (logarithms base D).

use crate::error::{Error, Result};
use crate::genome::space_size;

/// I = L - log_D(N), where N is the number of viable sequences.
///
/// `mers` is `None` when the viable set is empty: the information content
/// is undefined (infinite) and deliberately never reported as a number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfoContent {
    pub length: u32,
    pub alphabet: u8,
    pub viable_count: u64,
    pub mers: Option<f64>,
}

pub fn functional_information(viable_count: u64, length: u32, alphabet: u8) -> Result<InfoContent> {
    let total = space_size(length, alphabet)?;
    if viable_count > total {
        return Err(Error::InvalidConfig(format!(
            "viable count {viable_count} exceeds the sequence space {total}"
        )));
    }
    let mers = if viable_count == 0 {
        None
    } else {
        Some(length as f64 - (viable_count as f64).ln() / (alphabet as f64).ln())
    };
    Ok(InfoContent {
        length,
        alphabet,
        viable_count,
        mers,
    })
}
