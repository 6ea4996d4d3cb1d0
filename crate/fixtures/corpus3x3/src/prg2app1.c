int sum(int *a, int n) {
    int s = 0;
    int *end = a + n;
    while (a != end) {
        s += *a;
        a++;
    }
    return s;
}
