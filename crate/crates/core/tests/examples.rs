// Every example must run to completion.

macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!("../examples/", stringify!($name), ".rs"));

            #[test]
            fn runs() {
                main().unwrap();
            }
        }
    };
}

example!(energy_basics);
example!(gradient_check);
example!(fixed_xi_descent);
example!(random_search);
example!(snapshot_verify);
example!(campaign);
