package leak;

class Leak {
    void first() {
        helper();
    }

    class Inner {
        void deep() {
            Runnable r = new Runnable() {
                public void run() {
                    a();
                    b();
                    c();
                }
            };
            r.run();
        }
    }

    void last() {
        other();
    }

    void helper() {}
}

class Sibling {
    int value;
}
