//! The generated header must expose every exported symbol and stay in the
//! repository, since C consumers read it without running the Rust build.

use std::path::Path;

#[test]
fn header_lists_every_exported_symbol() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(root.join("include/manifold_heat.h"))
        .expect("generated header is present");
    let source = std::fs::read_to_string(root.join("src/lib.rs")).unwrap();

    let mut symbols = Vec::new();
    let mut lines = source.lines().peekable();
    while let Some(line) = lines.next() {
        if !line.contains("#[no_mangle]") {
            continue;
        }
        // The symbol name is on the following `pub unsafe extern` line.
        if let Some(decl) = lines.next() {
            if let Some(rest) = decl.split("fn ").nth(1) {
                let name: String = rest
                    .chars()
                    .take_while(|c| c.is_alphanumeric() || *c == '_')
                    .collect();
                symbols.push(name);
            }
        }
    }
    assert!(symbols.len() >= 15, "expected a full symbol list, found {}", symbols.len());
    for symbol in &symbols {
        assert!(header.contains(symbol), "header is missing `{symbol}`; rebuild to regenerate");
    }
    // Opaque handles and the status enum are part of the contract.
    for ty in ["MhManifold", "MhPointCloud", "MhGraph", "MhStatus", "MH_STATUS_OK"] {
        assert!(header.contains(ty), "header is missing `{ty}`");
    }
}
