package simple;

public class Counter {
    private int count;
    private final String name = "c", label;

    public Counter(String label) {
        this.label = label;
    }

    public void increment() {
        count++;
        log("inc");
    }

    public int get() {
        return count;
    }

    private void log(String msg) {
        System.out.println(msg);
    }
}
