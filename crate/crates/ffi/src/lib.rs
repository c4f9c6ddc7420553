#[no_mangle]
pub extern "C" fn superrad_abi_version() -> u32 {
    1
}
