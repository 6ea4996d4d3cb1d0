int max(int *a, int n) {
    int *end = a + n;
    int m = *a++;
    while (a != end) {
        if (*a > m)
            m = *a;
        a++;
    }
    return m;
}
