//! Prints base and lugsail lag windows on a grid, as CSV suitable for plotting.

use lugsail::windows::{WindowKind, WindowSpec};

fn main() -> lugsail::Result<()> {
    let specs: Vec<(String, WindowSpec)> = WindowKind::ALL
        .iter()
        .flat_map(|&kind| {
            [1, 2, 3].map(|r| {
                let spec = match r {
                    1 => WindowSpec::base(kind),
                    2 => WindowSpec::zero_bias(kind, 2).unwrap(),
                    _ => WindowSpec::balanced(kind, r).unwrap(),
                };
                (format!("{}{}", kind.name(), if r == 1 { String::new() } else { r.to_string() }), spec)
            })
        })
        .collect();
    let names: Vec<&str> = specs.iter().map(|(n, _)| n.as_str()).collect();
    println!("x,{}", names.join(","));
    for i in 0..=60 {
        let x = i as f64 * 0.025;
        let row: Vec<String> = specs.iter().map(|(_, s)| format!("{:.6}", s.weight(x))).collect();
        println!("{x:.3},{}", row.join(","));
    }
    Ok(())
}
