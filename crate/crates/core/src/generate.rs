//! Seeded random flow networks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::choice::ChoiceSpec;
use crate::error::GenerateError;
use crate::model::{NetworkBuilder, TradingNetwork};

/// A random flow network with terminals `s` and `t` and up to
/// `n_firms - 2` intermediate firms `f01, f02, …`.
///
/// Each possible contract `s → f`, `f → g` (`f ≠ g`, either direction) and
/// `f → t` is drawn with probability `density`. An intermediate firm left
/// with contracts on one side only gets a fresh contract from `s` or to `t`;
/// one left with no contracts is dropped, so density 0 gives the two
/// terminals alone. Preferences are uniformly random orders. The same
/// arguments always give the same network.
pub fn random_flow_network(seed: u64, n_firms: usize, density: f64) -> Result<TradingNetwork, GenerateError> {
    if n_firms < 2 {
        return Err(GenerateError::TooFewFirms(n_firms));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(GenerateError::InvalidDensity(density));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inner = n_firms - 2;
    let width = inner.to_string().len().max(2);
    let names: Vec<String> = (1..=inner).map(|i| format!("f{i:0width$}")).collect();
    let mut arcs: Vec<(String, String)> = Vec::new();
    for f in &names {
        if rng.gen_bool(density) {
            arcs.push(("s".into(), f.clone()));
        }
        for g in &names {
            if f != g && rng.gen_bool(density) {
                arcs.push((f.clone(), g.clone()));
            }
        }
        if rng.gen_bool(density) {
            arcs.push((f.clone(), "t".into()));
        }
    }
    let mut repairs = Vec::new();
    let mut kept = Vec::new();
    for f in &names {
        let buys = arcs.iter().any(|(_, b)| b == f);
        let sells = arcs.iter().any(|(s, _)| s == f);
        match (buys, sells) {
            (false, false) => continue,
            (true, false) => repairs.push((f.clone(), "t".to_string())),
            (false, true) => repairs.push(("s".to_string(), f.clone())),
            (true, true) => {}
        }
        kept.push(f.clone());
    }
    arcs.extend(repairs);
    let cwidth = arcs.len().to_string().len().max(3);
    let contracts: Vec<(String, String, String)> = arcs
        .into_iter()
        .enumerate()
        .map(|(i, (s, b))| (format!("c{:0cwidth$}", i + 1), s, b))
        .collect();

    let mut builder = NetworkBuilder::new();
    builder.firm("s", ChoiceSpec::Terminal).firm("t", ChoiceSpec::Terminal);
    for f in &kept {
        let mut ups: Vec<String> = contracts.iter().filter(|c| &c.2 == f).map(|c| c.0.clone()).collect();
        let mut downs: Vec<String> = contracts.iter().filter(|c| &c.1 == f).map(|c| c.0.clone()).collect();
        ups.shuffle(&mut rng);
        downs.shuffle(&mut rng);
        builder.firm(f, ChoiceSpec::flow_based(ups, downs));
    }
    for (id, s, b) in &contracts {
        builder.contract(id, s, b);
    }
    Ok(builder.build().expect("generated networks are well formed"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::network_to_json;

    #[test]
    fn deterministic() {
        let a = random_flow_network(7, 8, 0.3).unwrap();
        let b = random_flow_network(7, 8, 0.3).unwrap();
        assert_eq!(network_to_json(&a), network_to_json(&b));
        let c = random_flow_network(8, 8, 0.3).unwrap();
        assert_ne!(network_to_json(&a), network_to_json(&c));
    }

    #[test]
    fn zero_density_leaves_terminals() {
        let net = random_flow_network(1, 10, 0.0).unwrap();
        assert_eq!(net.firm_count(), 2);
        assert_eq!(net.contract_count(), 0);
        assert!(net.is_flow_network());
    }

    #[test]
    fn always_flow_networks() {
        for seed in 0..200 {
            let net = random_flow_network(seed, 2 + (seed as usize % 12), 0.1 + (seed % 7) as f64 / 10.0).unwrap();
            assert!(net.is_flow_network(), "seed {seed}");
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(random_flow_network(0, 1, 0.5).unwrap_err(), GenerateError::TooFewFirms(1));
        assert!(matches!(random_flow_network(0, 4, 1.5), Err(GenerateError::InvalidDensity(_))));
    }
}
