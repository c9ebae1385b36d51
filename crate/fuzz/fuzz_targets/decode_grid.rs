#![no_main]

use libfuzzer_sys::fuzz_target;
use uvf_core::io::{decode_grid, encode_grid};

fuzz_target!(|data: &[u8]| {
    if let Ok(stack) = decode_grid(data) {
        // Anything accepted must re-encode to the same bytes.
        assert_eq!(encode_grid(&stack), data);
        if stack.channel_count() == 2 {
            let _ = stack.to_field();
        }
        let _ = stack.to_scalars();
    }
});
