unsigned fact(unsigned n) {
    unsigned f = 1;
    if (n < 2)
        return 1;
    do {
        f *= n;
    } while (--n > 1);
    return f;
}
