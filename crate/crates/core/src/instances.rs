//! Standard finite-type seeds used in tests, examples and the CLI.

use crate::error::Result;
use crate::seed::QuantumSeed;

/// `B = Lambda = [[0,-1],[1,0]]`, `D = (1,1)`.
pub fn a2() -> QuantumSeed {
    let b = vec![vec![0, -1], vec![1, 0]];
    QuantumSeed::new(2, vec![0, 1], b.clone(), b, vec![1, 1]).expect("A2 seed is compatible")
}

/// `B = [[0,-2],[1,0]]`, `Lambda = [[0,-1],[1,0]]`, `D = (1,2)`.
pub fn b2() -> QuantumSeed {
    QuantumSeed::new(2, vec![0, 1], vec![vec![0, -2], vec![1, 0]], vec![vec![0, -1], vec![1, 0]], vec![1, 2])
        .expect("B2 seed is compatible")
}

/// Linear A3 with one frozen vertex attached to vertex 1; the unframed matrix is singular.
pub fn a3() -> QuantumSeed {
    let b = vec![vec![0, -1, 0], vec![1, 0, -1], vec![0, 1, 0], vec![1, 0, 0]];
    QuantumSeed::with_synthesized_lambda(4, vec![0, 1, 2], b).expect("framed A3 admits a compatible Lambda")
}

/// A2 with principal coefficients: `B~ = [B; I]`, `Lambda = [[0,-I],[I,-B]]`.
pub fn a2_principal() -> QuantumSeed {
    let b = vec![vec![0, -1], vec![1, 0], vec![1, 0], vec![0, 1]];
    let lambda = vec![vec![0, 0, -1, 0], vec![0, 0, 0, -1], vec![1, 0, 0, 1], vec![0, 1, -1, 0]];
    QuantumSeed::new(4, vec![0, 1], b, lambda, vec![1, 1]).expect("principal A2 is compatible")
}

/// Looks up a built-in instance by name.
pub fn by_name(name: &str) -> Option<QuantumSeed> {
    match name.to_ascii_lowercase().as_str() {
        "a2" => Some(a2()),
        "b2" => Some(b2()),
        "a3" => Some(a3()),
        "a2-principal" | "a2p" => Some(a2_principal()),
        _ => None,
    }
}

pub fn all() -> Result<Vec<(&'static str, QuantumSeed)>> {
    Ok(vec![("A2", a2()), ("B2", b2()), ("A3", a3()), ("A2-principal", a2_principal())])
}
