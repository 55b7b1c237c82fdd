//! Regenerates the shipped presentation files:
//! `cargo run --example write_presentations -- presentations`

use std::path::PathBuf;

use infgraph::automatic::{grid, nat_line};

fn main() -> std::io::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "presentations".into()));
    std::fs::create_dir_all(&dir)?;
    let files = [
        ("nline.ap", "; the ray 0 - 1 - 2 - ...; vertex n is 1^n\n", nat_line()),
        (
            "grid.ap",
            "; the grid Z^2; (x, y) is a word of sign pairs, sign(x) for the first |x|\n; positions and 0 after, likewise for y\n",
            grid(),
        ),
    ];
    for (name, header, p) in files {
        std::fs::write(dir.join(name), format!("{header}{}", p.to_text()))?;
    }
    Ok(())
}
