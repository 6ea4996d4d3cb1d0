static int add(int x, int y) { return x + y; }

int sum(int *a, int n) {
    if (n == 0)
        return 0;
    return add(a[0], sum(a + 1, n - 1));
}
