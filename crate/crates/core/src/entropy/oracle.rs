use crate::error::{Error, Result};
use crate::model::{Flow, GoodSubspace};

/// Largest `d + w` the enumeration accepts.
pub const ORACLE_MAX_DIM: usize = 12;

/// `codim C_n(phi, U)` by listing every vector of the GF(2) window and
/// pushing it through the window matrix `n - 1` times. Uses no linear
/// algebra beyond matrix-vector products on bitmasks.
///
/// The answer is the true codimension only when `window` meets the
/// guarantee bound of the flow.
pub fn brute_force_codim(flow: &Flow, u: &GoodSubspace, n: usize, window: usize) -> Result<usize> {
    if !flow.field().is_gf2() {
        return Err(Error::FieldMismatch {
            expected: "GF(2)".into(),
            found: flow.field().to_string(),
        });
    }
    let dim = flow.shape().window_dim(window);
    if dim > ORACLE_MAX_DIM {
        return Err(Error::TooLarge(format!(
            "window dimension {dim} exceeds {ORACLE_MAX_DIM}"
        )));
    }
    assert!(n >= 1, "cotrajectories start at n = 1");
    let t = flow.truncate(window)?;
    let rows: Vec<u32> = (0..dim)
        .map(|i| (0..dim).filter(|&j| t.matrix.get(i, j) == 1).map(|j| 1u32 << j).sum())
        .collect();
    let apply = |v: u32| -> u32 {
        rows.iter()
            .enumerate()
            .filter(|(_, &r)| (r & v).count_ones() % 2 == 1)
            .map(|(i, _)| 1u32 << i)
            .sum()
    };
    let constrained: u32 = u
        .constrained_coords(flow.shape(), window)
        .iter()
        .map(|&c| 1u32 << c)
        .sum();
    let dim_u = dim - constrained.count_ones() as usize;

    let mut count = 0u64;
    for v in 0..(1u32 << dim) {
        if v & constrained != 0 {
            continue;
        }
        let mut x = v;
        let mut inside = true;
        for _ in 1..n {
            x = apply(x);
            if x & constrained != 0 {
                inside = false;
                break;
            }
        }
        if inside {
            count += 1;
        }
    }
    let dim_c = count.trailing_zeros() as usize;
    debug_assert_eq!(count, 1 << dim_c);
    Ok(dim_u - dim_c)
}
