//! Thin launcher for the library's command-line surface.

fn main() {
    std::process::exit(dualproj::cli::main());
}
