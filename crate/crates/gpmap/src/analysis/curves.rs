//! Information-density curves and their theoretical baselines.
//!
//! For a viable genotype i, rho_i(n) is the fraction of sequences within
//! Hamming distance n that are viable, and phi_i(n) = log_D rho_i(n) its
//! log-density in mers. Every curve starts at phi(0) = 0 and ends at
//! phi(L) = -I_L. Exact integer numerators and denominators are retained
//! alongside the floating-point ratios.

use crate::census::Census;
use crate::error::{Error, Result};

use super::distance::viable_counts_by_distance;
use super::hamming::robustness_all;

/// Exact binomial coefficient; panics on u64 overflow (far beyond the
/// supported envelope).
pub fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 1..=k as u128 {
        result = result * (n as u128 - (k as u128 - i)) / i;
    }
    u64::try_from(result).expect("binomial fits u64 inside the rank envelope")
}

/// Cumulative neighborhood sizes: entry n is sum_{k<=n} C(L,k)(D-1)^k.
/// The final entry equals D^L exactly (binomial theorem).
pub fn cumulative_space(length: u32, alphabet: u8) -> Vec<u64> {
    let mut cumulative = Vec::with_capacity(length as usize + 1);
    let mut acc: u128 = 0;
    let mut power: u128 = 1; // (D-1)^k
    for k in 0..=length {
        acc += binomial(length, k) as u128 * power;
        power *= (alphabet - 1) as u128;
        cumulative.push(u64::try_from(acc).expect("partial sums bounded by D^L"));
    }
    cumulative
}

/// One genotype's density curve. All arrays have length L+1, indexed by n.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityCurve {
    pub rank: u64,
    /// Viable counts at exact distance k.
    pub counts: Vec<u64>,
    /// Cumulative numerators: viable within distance n.
    pub cum_viable: Vec<u64>,
    /// Cumulative denominators: all sequences within distance n.
    pub cum_total: Vec<u64>,
    pub rho: Vec<f64>,
    pub phi: Vec<f64>,
}

pub(crate) fn curve_from_counts(
    rank: u64,
    counts: Vec<u64>,
    cum_total: &[u64],
    alphabet: u8,
) -> DensityCurve {
    let ln_d = (alphabet as f64).ln();
    let mut cum_viable = Vec::with_capacity(counts.len());
    let mut acc = 0u64;
    for &c in &counts {
        acc += c;
        cum_viable.push(acc);
    }
    let rho: Vec<f64> = cum_viable
        .iter()
        .zip(cum_total)
        .map(|(&num, &den)| num as f64 / den as f64)
        .collect();
    let phi: Vec<f64> = cum_viable
        .iter()
        .zip(cum_total)
        .map(|(&num, &den)| ((num as f64).ln() - (den as f64).ln()) / ln_d)
        .collect();
    DensityCurve {
        rank,
        counts,
        cum_viable,
        cum_total: cum_total.to_vec(),
        rho,
        phi,
    }
}

/// Density curve of one viable genotype. Curves are defined for viable
/// genotypes only; asking for any other rank is an error.
pub fn density_curve(census: &Census, rank: u64) -> Result<DensityCurve> {
    let counts = viable_counts_by_distance(census, rank)?;
    let cum_total = cumulative_space(census.length, census.alphabet());
    Ok(curve_from_counts(rank, counts, &cum_total, census.alphabet()))
}

/// Density curves of every viable genotype, computed in one pass over the
/// unordered viable pairs.
pub fn all_density_curves(census: &Census) -> Vec<DensityCurve> {
    let count = census.viable_ranks.len();
    let length = census.length as usize;
    let alphabet = census.alphabet();
    let mut counts = vec![vec![0u64; length + 1]; count];
    for row in counts.iter_mut() {
        row[0] = 1;
    }

    if length <= 8 {
        // One byte lane per position: distance = nonzero bytes of the xor.
        let packed: Vec<u64> = census
            .viable_ranks
            .iter()
            .map(|&rank| {
                let genome = census.genome(rank).expect("viable rank within space");
                genome
                    .symbols()
                    .iter()
                    .fold(0u64, |acc, &s| (acc << 8) | s as u64)
            })
            .collect();
        for i in 0..count {
            let a = packed[i];
            for j in (i + 1)..count {
                let distance = nonzero_bytes(a ^ packed[j]) as usize;
                counts[i][distance] += 1;
                counts[j][distance] += 1;
            }
        }
    } else {
        let digits: Vec<Vec<u8>> = census
            .viable_ranks
            .iter()
            .map(|&rank| {
                census
                    .genome(rank)
                    .expect("viable rank within space")
                    .symbols()
                    .to_vec()
            })
            .collect();
        for i in 0..count {
            for j in (i + 1)..count {
                let distance = digits[i]
                    .iter()
                    .zip(&digits[j])
                    .filter(|(a, b)| a != b)
                    .count();
                counts[i][distance] += 1;
                counts[j][distance] += 1;
            }
        }
    }

    let cum_total = cumulative_space(census.length, alphabet);
    counts
        .into_iter()
        .zip(&census.viable_ranks)
        .map(|(c, &rank)| curve_from_counts(rank, c, &cum_total, alphabet))
        .collect()
}

#[inline]
fn nonzero_bytes(x: u64) -> u32 {
    let mut t = x;
    t |= t >> 4;
    t |= t >> 2;
    t |= t >> 1;
    (t & 0x0101_0101_0101_0101).count_ones()
}

/// Arithmetic mean of phi_i(n) across all viable genotypes, per n.
pub fn mean_curve(census: &Census) -> Result<Vec<f64>> {
    if census.viable_ranks.is_empty() {
        return Err(Error::InvalidConfig(
            "mean curve is undefined for an empty viable set".into(),
        ));
    }
    let curves = all_density_curves(census);
    let mut mean = vec![0.0; census.length as usize + 1];
    for curve in &curves {
        for (slot, &phi) in mean.iter_mut().zip(&curve.phi) {
            *slot += phi;
        }
    }
    for slot in mean.iter_mut() {
        *slot /= curves.len() as f64;
    }
    Ok(mean)
}

pub(crate) fn mean_of_curves(length: u32, curves: &[DensityCurve]) -> Vec<f64> {
    let mut mean = vec![0.0; length as usize + 1];
    for curve in curves {
        for (slot, &phi) in mean.iter_mut().zip(&curve.phi) {
            *slot += phi;
        }
    }
    for slot in mean.iter_mut() {
        *slot /= curves.len() as f64;
    }
    mean
}

/// Lower limit of phi(n) for perfectly compressed information: a lone
/// viable sequence with no viable neighbors at any depth.
pub fn compressed_baseline(length: u32, alphabet: u8) -> Vec<f64> {
    let ln_d = (alphabet as f64).ln();
    cumulative_space(length, alphabet)
        .iter()
        .map(|&den| 0.0 - (den as f64).ln() / ln_d)
        .collect()
}

/// Straight-line decay from (0, 0) to (L, -I_L): how log-density would fall
/// if sites did not interact (no epistasis), since independent per-site
/// viability multiplies.
pub fn no_epistasis_baseline(length: u32, info_mers: f64) -> Result<Vec<f64>> {
    if !(0.0..=length as f64).contains(&info_mers) {
        return Err(Error::InvalidConfig(format!(
            "information content {info_mers} is outside [0, {length}] mers"
        )));
    }
    Ok((0..=length)
        .map(|n| 0.0 - n as f64 / length as f64 * info_mers)
        .collect())
}

/// Default dead band, in mers, inside which a deviation counts as zero.
pub const EPISTASIS_DEADBAND: f64 = 1e-9;

/// Sign of phi(n) - phi_ne(n) per depth: +1 marks antagonistic epistasis
/// (slower-than-independent decay), -1 synergistic, 0 within the dead band.
pub fn epistasis_sign(phi: &[f64], baseline: &[f64], deadband: f64) -> Result<Vec<i8>> {
    if phi.len() != baseline.len() {
        return Err(Error::InvalidConfig(format!(
            "curve has {} entries but the baseline has {}",
            phi.len(),
            baseline.len()
        )));
    }
    Ok(phi
        .iter()
        .zip(baseline)
        .map(|(&p, &b)| {
            let delta = p - b;
            if delta.abs() <= deadband {
                0
            } else if delta > 0.0 {
                1
            } else {
                -1
            }
        })
        .collect())
}

/// Robustness of every viable genotype plus the extremes, ties resolved by
/// smallest rank.
pub fn robustness_profile(census: &Census) -> RobustnessProfile {
    let values = robustness_all(census);
    let mut most_robust = None;
    let mut most_fragile = None;
    for (index, &nu) in values.iter().enumerate() {
        let rank = census.viable_ranks[index];
        match most_robust {
            None => most_robust = Some((rank, nu)),
            Some((_, best)) if nu > best => most_robust = Some((rank, nu)),
            _ => {}
        }
        match most_fragile {
            None => most_fragile = Some((rank, nu)),
            Some((_, worst)) if nu < worst => most_fragile = Some((rank, nu)),
            _ => {}
        }
    }
    RobustnessProfile {
        values,
        most_robust,
        most_fragile,
    }
}

#[derive(Debug, Clone)]
pub struct RobustnessProfile {
    /// Indexed like `census.viable_ranks`.
    pub values: Vec<u32>,
    pub most_robust: Option<(u64, u32)>,
    pub most_fragile: Option<(u64, u32)>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{run_census, CensusConfig};
    use crate::isa::IsaSpec;

    fn census(length: u32) -> Census {
        let mut config = CensusConfig::new(length, IsaSpec::default_v1()).unwrap();
        config.shard_count = 8;
        let mut census = run_census(&config, 2).unwrap();
        census.build_bitmap();
        census
    }

    #[test]
    fn binomial_basics() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(9, 1), 9);
        assert_eq!(binomial(9, 4), 126);
        assert_eq!(binomial(5, 6), 0);
        assert_eq!(binomial(52, 26), 495_918_532_948_104);
    }

    #[test]
    fn cumulative_space_ends_at_the_whole_space() {
        for (length, alphabet) in [(6u32, 8u8), (9, 26), (12, 26), (1, 2)] {
            let cumulative = cumulative_space(length, alphabet);
            assert_eq!(cumulative[0], 1);
            let total = (alphabet as u64).pow(length);
            assert_eq!(*cumulative.last().unwrap(), total);
        }
    }

    #[test]
    fn isolated_genotype_matches_closed_form() {
        // A lone viable sequence at L=9, D=26: rho(1) = 1/226.
        let cumulative = cumulative_space(9, 26);
        assert_eq!(cumulative[1], 226);
        let phi1 = -((226.0f64).ln() / 26.0f64.ln());
        assert!((phi1 - (-1.6637)).abs() < 1e-3);
        let baseline = compressed_baseline(9, 26);
        assert!((baseline[1] - phi1).abs() < 1e-12);
        assert_eq!(baseline[0], 0.0);
        assert!((baseline[9] - (-9.0)).abs() < 1e-9);
    }

    #[test]
    fn curves_start_at_zero_and_end_at_minus_information() {
        let census = census(4);
        let info = census.information().mers.unwrap();
        for &rank in &census.viable_ranks {
            let curve = density_curve(&census, rank).unwrap();
            assert_eq!(curve.phi[0], 0.0);
            assert_eq!(curve.cum_viable[0], 1);
            assert!((curve.phi[4] + info).abs() < 1e-9);
            assert_eq!(*curve.cum_viable.last().unwrap(), census.viable_count());
        }
    }

    #[test]
    fn batch_curves_match_single_curves() {
        let census = census(4);
        let all = all_density_curves(&census);
        assert_eq!(all.len(), census.viable_ranks.len());
        for curve in &all {
            let single = density_curve(&census, curve.rank).unwrap();
            assert_eq!(curve, &single);
        }
    }

    #[test]
    fn mean_curve_shares_the_endpoints() {
        let census = census(4);
        let mean = mean_curve(&census).unwrap();
        let info = census.information().mers.unwrap();
        assert!(mean[0].abs() < 1e-12);
        assert!((mean[4] + info).abs() < 1e-9);
    }

    #[test]
    fn no_epistasis_line_is_linear() {
        let line = no_epistasis_baseline(9, 5.778).unwrap();
        assert_eq!(line[0], 0.0);
        assert!((line[9] + 5.778).abs() < 1e-12);
        assert!((line[3] - (-1.926)).abs() < 1e-9);
        assert!(no_epistasis_baseline(9, 9.5).is_err());
        assert!(no_epistasis_baseline(9, -0.1).is_err());
    }

    #[test]
    fn epistasis_sign_dead_band_and_endpoints() {
        let baseline = no_epistasis_baseline(4, 2.0).unwrap();
        let same = epistasis_sign(&baseline, &baseline, EPISTASIS_DEADBAND).unwrap();
        assert_eq!(same, vec![0, 0, 0, 0, 0]);
        let phi = vec![0.0, -0.2, -1.3, -1.8, -2.0];
        let signs = epistasis_sign(&phi, &baseline, EPISTASIS_DEADBAND).unwrap();
        assert_eq!(signs, vec![0, 1, -1, -1, 0]);
        assert!(epistasis_sign(&phi[..3], &baseline, EPISTASIS_DEADBAND).is_err());
    }

    #[test]
    fn nonzero_bytes_counts_lanes() {
        assert_eq!(nonzero_bytes(0), 0);
        assert_eq!(nonzero_bytes(0x01), 1);
        assert_eq!(nonzero_bytes(0x80_00_00_00_00_00_00_01), 2);
        assert_eq!(nonzero_bytes(u64::MAX), 8);
        assert_eq!(nonzero_bytes(0x00_07_00_00_05_00_00_00), 2);
    }

    #[test]
    fn isolated_replicator_curve_at_letter_scale() {
        // One lone viable sequence in the 26^9 space: rho(1) = 1/226.
        let isa = IsaSpec::default_v1().with_pad_nops(18).unwrap();
        let config = CensusConfig::new(9, isa.clone()).unwrap();
        let census = Census {
            length: 9,
            isa,
            limits: config.limits,
            budgets: config.budgets,
            total: config.total(),
            viable_ranks: vec![123_456_789],
            self_replicator_count: 1,
            bitmap: None,
        };
        let curve = density_curve(&census, 123_456_789).unwrap();
        assert_eq!(curve.cum_viable[1], 1);
        assert_eq!(curve.cum_total[1], 226);
        assert!((curve.rho[1] - 1.0 / 226.0).abs() < 1e-15);
        assert!((curve.phi[1] - (-1.6637)).abs() < 1e-3);
        // And the curve tracks the compressed floor exactly.
        let floor = compressed_baseline(9, 26);
        for (phi, min) in curve.phi.iter().zip(&floor) {
            assert!((phi - min).abs() < 1e-12);
        }
    }

    #[test]
    fn most_robust_genotype_shows_antagonistic_first_step() {
        // phi(1) = log_D((1 + nu_max) / (1 + L(D-1))) sits above the
        // no-epistasis line -I/L, so s(1) = +1.
        let census = census(5);
        let info = census.information().mers.unwrap();
        let profile = robustness_profile(&census);
        let (rank, nu_max) = profile.most_robust.unwrap();
        let curve = density_curve(&census, rank).unwrap();
        let closed_form =
            (((1 + nu_max) as f64) / (1.0 + 5.0 * 7.0)).ln() / 8f64.ln();
        assert!((curve.phi[1] - closed_form).abs() < 1e-12);
        let line = no_epistasis_baseline(5, info).unwrap();
        let signs = epistasis_sign(&curve.phi, &line, EPISTASIS_DEADBAND).unwrap();
        assert_eq!(signs[0], 0);
        assert_eq!(signs[1], 1, "phi(1) = {} vs line {}", curve.phi[1], line[1]);
        assert_eq!(signs[5], 0);
    }
}
