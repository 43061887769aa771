//! Sobol designs: the canonical sequence, a scrambled copy, and how evenly
//! both fill the unit square.

use adascale::numerics::sobol_sequence;

fn main() -> adascale::Result<()> {
    let plain = sobol_sequence(8, 2, 0, false)?;
    let shifted = sobol_sequence(8, 2, 42, true)?;
    println!("{:>18} {:>22}", "canonical", "scrambled (seed 42)");
    for (a, b) in plain.iter().zip(&shifted) {
        println!("({:.4}, {:.4})   ({:.4}, {:.4})", a[0], a[1], b[0], b[1]);
    }

    // every dyadic 1/4 x 1/4 cell of the first 16 points holds exactly one point
    for (label, pts) in [
        ("canonical", sobol_sequence(16, 2, 0, false)?),
        ("scrambled", sobol_sequence(16, 2, 7, true)?),
    ] {
        let mut cells = [0usize; 16];
        for p in &pts {
            cells[(p[0] * 4.0) as usize * 4 + (p[1] * 4.0) as usize] += 1;
        }
        println!("{label}: cell counts {cells:?}");
    }

    let wide = sobol_sequence(4, 1000, 0, false)?;
    println!("1000-d point #3, first five coordinates: {:?}", &wide[3][..5]);
    Ok(())
}
