fn main() {
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").expect("manifest dir");
    let out = std::path::Path::new(&crate_dir)
        .join("include")
        .join("tenper.h");
    std::fs::create_dir_all(out.parent().unwrap()).expect("include dir");

    let config = cbindgen::Config {
        language: cbindgen::Language::C,
        include_guard: Some("TENPER_H".to_string()),
        header: Some("/* C interface to the tenper exact tensor-permanent library. */".to_string()),
        cpp_compat: true,
        documentation: true,
        style: cbindgen::Style::Type,
        enumeration: cbindgen::EnumConfig {
            prefix_with_name: true,
            ..Default::default()
        },
        ..Default::default()
    };
    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("cbindgen generates the header")
        .write_to_file(out);
    println!("cargo:rerun-if-changed=src/lib.rs");
}
