//! Regenerates the committed C header from the extern "C" surface.
//! `Bindings::write_to_file` leaves the file untouched when the content
//! is unchanged, so clean rebuilds stay deterministic.

use std::path::Path;

fn main() {
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").expect("cargo sets the manifest dir");
    let config = cbindgen::Config::from_file(Path::new(&crate_dir).join("cbindgen.toml"))
        .expect("cbindgen.toml parses");
    let bindings = cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("the extern \"C\" surface translates to C");
    bindings.write_to_file(Path::new(&crate_dir).join("include").join("conifold.h"));
}
