fn main() {
    airy_hodge::cli::main()
}
