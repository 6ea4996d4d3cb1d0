int sum(int *a, int n) {
    int s = 0, i = 0;
loop:
    if (i >= n)
        goto done;
    s = s + a[i];
    i = i + 1;
    goto loop;
done:
    return s;
}
