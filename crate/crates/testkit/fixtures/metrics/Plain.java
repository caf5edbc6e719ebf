class Plain {
    int a, b;

    int sum() {
        return Math.max(a, b) + Math.min(a, b) + Math.abs(a);
    }

    int twice() {
        return sum() * 2;
    }
}
