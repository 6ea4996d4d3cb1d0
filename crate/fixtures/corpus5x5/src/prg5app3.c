int count(int *a, int n, int v) {
    int c = 0, i = 0;
loop:
    if (i >= n)
        goto done;
    c = c + (a[i] == v ? 1 : 0);
    i = i + 1;
    goto loop;
done:
    return c;
}
