//! Window constants and the bias/variance multipliers of the lugsail transform.

use lugsail::diagnostics::{bias_factor, variance_factor};
use lugsail::windows::{lugsail_l2sq, WindowKind, WindowSpec};

fn main() -> lugsail::Result<()> {
    println!("{:<9} {:>2} {:>3} {:>8} {:>8} {:>9} {:>9}", "window", "q", "r", "c", "∫k²", "bias x", "var x");
    for kind in WindowKind::ALL {
        let q = kind.constants().q;
        for (r, spec) in [
            (1, WindowSpec::base(kind)),
            (2, WindowSpec::zero_bias(kind, 2)?),
            (2, WindowSpec::balanced(kind, 2)?),
            (3, WindowSpec::balanced(kind, 3)?),
        ] {
            println!(
                "{:<9} {:>2} {:>3} {:>8.4} {:>8.4} {:>+9.4} {:>9.4}",
                kind.name(),
                q,
                r,
                spec.c,
                lugsail_l2sq(&spec),
                bias_factor(r, spec.c, q),
                lugsail_l2sq(&spec) / kind.constants().l2sq,
            );
        }
    }
    println!("\nlugsail BM variance multiplier, r=3 c=1/2: {}", variance_factor(3, 0.5));
    Ok(())
}
