//! Writes the plot tables into a directory (default: a temp dir).

use std::path::PathBuf;

use tailrisk::report::{plot_files, write_files};
use tailrisk::GamesTable;

fn main() -> tailrisk::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("tailrisk-plots"));
    let files = plot_files(&GamesTable::bundled())?;
    for path in write_files(&dir, &files)? {
        let rows = std::fs::read_to_string(&path).map(|s| s.lines().count() - 1).unwrap_or(0);
        println!("{} ({rows} rows)", path.display());
    }
    Ok(())
}
