//! The directly constructed private `(2, 2; 1, 2/3)` scheme with three
//! subfiles per file and coded cache contents.

use crate::linalg::BitMatrix;
use crate::scheme::{Scheme, SchemeParams};
use crate::verify::decodable_files;

use super::{symbolic_matrix, tabulate};

/// `[Z_00, Z_01]` and `[Z_10, Z_11]`.
pub fn table1_caches() -> [[BitMatrix; 2]; 2] {
    let m = |rows: &[&str]| symbolic_matrix(2, 3, rows).expect("literal rows");
    [
        [m(&["A0+A1", "B0+B1", "A2+B1"]), m(&["A0+A1", "B0+B1", "A1+B2"])],
        [m(&["A0+A2", "B0+B2", "A1+B2"]), m(&["A0+A2", "B0+B2", "A2+B1"])],
    ]
}

/// Transmissions used when both users hold option 0, in demand order AA, AB, BA, BB.
pub fn table1_transmissions() -> [BitMatrix; 4] {
    let m = |rows: &[&str]| symbolic_matrix(2, 3, rows).expect("literal rows");
    [
        m(&["A0", "B0"]),
        m(&["A1", "B1"]),
        m(&["A2", "B2"]),
        m(&["A0+A1+A2", "B0+B1+B2"]),
    ]
}

/// For keys `(k0, k1)` and demand `(d0, d1)`, sends the unique alphabet member
/// from which `Z_{0,k0}` recovers `d0` and `Z_{1,k1}` recovers `d1`.
pub fn build_table1() -> Scheme {
    let params = SchemeParams::new(2, 2, 3).expect("fixed parameters");
    let caches = table1_caches();
    let alphabet = table1_transmissions();
    let tx = tabulate(2, vec![2, 2], 1, |d, k, _| {
        let c0 = &caches[0][k.0[0]];
        let c1 = &caches[1][k.0[1]];
        let hits: Vec<&BitMatrix> = alphabet
            .iter()
            .filter(|t| {
                decodable_files(c0, t, &params) >> d.0[0] & 1 == 1 && decodable_files(c1, t, &params) >> d.0[1] & 1 == 1
            })
            .collect();
        assert_eq!(hits.len(), 1, "recovery table row is a permutation");
        Ok(hits[0].clone())
    })
    .expect("small table");
    Scheme::new(params, caches.into_iter().map(Vec::from).collect(), tx, "table1(K=2,N=2,f=3)").expect("well formed")
}
