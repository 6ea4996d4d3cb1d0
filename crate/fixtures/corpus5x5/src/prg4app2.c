unsigned max(unsigned *a, unsigned n) {
    unsigned m = 0;
    if (!n)
        return 0;
    do {
        --n;
        if (a[n] > m)
            m = a[n];
    } while (n);
    return m;
}
