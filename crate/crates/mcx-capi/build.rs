use std::path::PathBuf;

// Regenerates include/mcx.h from the extern "C" surface. cbindgen only
// rewrites the file when the contents change, so incremental builds stay
// quiet.
fn main() {
    let crate_dir = PathBuf::from(std::env::var("CARGO_MANIFEST_DIR").unwrap());

    let config = cbindgen::Config {
        language: cbindgen::Language::C,
        cpp_compat: true,
        include_guard: Some("MCX_H".to_string()),
        documentation: true,
        header: Some("/* C interface for the multicomplex kernel. */".to_string()),
        enumeration: cbindgen::EnumConfig {
            prefix_with_name: true,
            rename_variants: cbindgen::RenameRule::ScreamingSnakeCase,
            ..Default::default()
        },
        ..Default::default()
    };

    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("cbindgen failed")
        .write_to_file(crate_dir.join("include").join("mcx.h"));

    println!("cargo:rerun-if-changed=src/lib.rs");
}
